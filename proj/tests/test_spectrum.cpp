#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "milnebands/errors.hpp"
#include "milnebands/floquet.hpp"
#include "milnebands/oracle.hpp"
#include "milnebands/spectrum.hpp"
#include "support/oracles.hpp"

using namespace milnebands;
using std::numbers::pi;

// Reference levels are quoted to four decimals; each one sits within 5e-5 of the
// true root, and dPhi/dE is at most a few hundred in the ground band.
TEST_CASE("total phase at tabulated N=2 levels") {
  const SolverSettings s;
  const Potential sym(-1.25, -1.25, 2);
  const Potential asym(-1.35, -1.25, 2);
  CHECK(total_phase(-0.7803, sym, s).phi == doctest::Approx(pi).epsilon(0.01));
  CHECK(total_phase(-0.7475, sym, s).phi == doctest::Approx(2 * pi).epsilon(0.01));
  CHECK(total_phase(-0.8445, asym, s).phi == doctest::Approx(pi).epsilon(0.01));

  const PhaseSum ps = total_phase(-0.76, asym, s);
  CHECK(ps.alpha > 0.0);
  CHECK(ps.beta > 0.0);
  CHECK(ps.phi == doctest::Approx(ps.alpha + ps.beta));
}

TEST_CASE("total phase rejects energies outside (min v, 0)") {
  const SolverSettings s;
  const Potential pot(-1.35, -1.25, 2);
  CHECK_THROWS_AS(total_phase(-1.4, pot, s), EnergyRangeError);
  CHECK_THROWS_AS(total_phase(0.0, pot, s), EnergyRangeError);
  CHECK_THROWS_AS(total_phase(0.2, pot, s), EnergyRangeError);
}

TEST_CASE("find_levels reproduces the N=4 symmetric and N=6 asymmetric columns") {
  const SolverSettings s;
  const auto sym4 = find_levels(Potential(-1.25, -1.25, 4), s);
  const std::vector<double> want4 = {-0.7898, -0.7748, -0.7546, -0.7366};
  REQUIRE(sym4.size() >= want4.size());
  for (std::size_t j = 0; j < want4.size(); ++j) {
    CHECK(sym4[j].index_j == static_cast<int>(j));
    CHECK(std::abs(sym4[j].energy - want4[j]) < 5e-4);
  }

  const auto asym6 = find_levels(Potential(-1.35, -1.25, 6), s);
  const std::vector<double> want6 = {-0.8628, -0.8438, -0.8215, -0.7859, -0.7632, -0.7396};
  REQUIRE(asym6.size() >= want6.size());
  for (std::size_t j = 0; j < want6.size(); ++j) CHECK(std::abs(asym6[j].energy - want6[j]) < 5e-4);
}

TEST_CASE("level invariants: ordering, quantization residual and energy range") {
  const SolverSettings s;
  for (const auto& tc : oracles::table_cases()) {
    const Potential pot(tc.v1, tc.v2, tc.n_cells);
    const auto levels = find_levels(pot, s);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const Level& l = levels[k];
      CHECK(l.index_j == static_cast<int>(k));
      CHECK(l.phase_residual() < 1e-8);
      CHECK(l.energy > pot.floor());
      CHECK(l.energy < 0.0);
      if (k > 0) CHECK(l.energy > levels[k - 1].energy);
    }
  }
}

TEST_CASE("zero or repulsive potential has no levels") {
  const SolverSettings s;
  CHECK(find_levels(Potential(0.0, 0.0, 2), s).empty());
  CHECK(find_levels(Potential(0.0, 0.0, 6), s).empty());
  CHECK(find_levels(Potential(0.5, 1.0, 4), s).empty());
}

TEST_CASE("scan resolution and settings errors") {
  const SolverSettings s;
  // 50 points over (-1.35, 0) cannot separate the N=6 lower group (spacing ~0.02)
  CHECK_THROWS_AS(find_levels(Potential(-1.25, -1.25, 6), s, 50), ResolutionError);
  CHECK_THROWS_AS(find_levels(Potential(-1.35, -1.25, 2), s, 49), ValidationError);
}

TEST_CASE("phase is strictly increasing over the scan grid") {
  const SolverSettings s;
  const Potential pot(-1.35, -1.25, 4);
  double last = -1.0;
  for (int i = 0; i < 120; ++i) {
    const double e = -1.35 + 1e-6 + (1.35 - 2e-6) * i / 119.0;
    const double phi = total_phase(e, pot, s).phi;
    CHECK(phi > last);
    last = phi;
  }
}

TEST_CASE("wavefunction normalisation, parity and decay") {
  const SolverSettings s;
  const Potential pot(-1.25, -1.25, 2);
  const auto levels = find_levels(pot, s);
  REQUIRE(levels.size() >= 2);

  for (const Level& l : levels) {
    const std::vector<double> grid = {pot.junction()};
    const auto w = wavefunction(l, pot, s, grid);
    CHECK(w[0].f == std::sin(l.alpha));
    // definite parity about the centre of a symmetric potential
    CHECK((std::abs(std::sin(l.alpha)) > 0.999 || std::abs(std::cos(l.alpha)) > 0.999));
  }

  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(pot.support_end() * i / 200.0);
  grid.push_back(pot.junction() + 30.0);
  grid.push_back(pot.junction() - 30.0);
  const auto w = wavefunction(levels[0], pot, s, grid);
  double peak = 0.0;
  for (std::size_t i = 0; i + 2 < w.size(); ++i) peak = std::max(peak, std::abs(w[i].f));
  CHECK(std::abs(w[w.size() - 2].f) < 1e-3 * peak);
  CHECK(std::abs(w.back().f) < 1e-3 * peak);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(w[i].x == grid[i]);
}

TEST_CASE("wavefunction derivative at the junction is cos(alpha)") {
  const SolverSettings s;
  const Potential pot(-1.35, -1.25, 4);
  const auto levels = find_levels(pot, s);
  REQUIRE(!levels.empty());
  const double h = 1e-4;
  const std::vector<double> grid = {pot.junction() - h, pot.junction() + h};
  const auto w = wavefunction(levels[1], pot, s, grid);
  CHECK((w[1].f - w[0].f) / (2 * h) == doctest::Approx(std::cos(levels[1].alpha)).epsilon(1e-6));
}

TEST_CASE("levels agree with the finite-difference oracle") {
  const SolverSettings s;
  for (const auto& tc : oracles::table_cases()) {
    const Potential pot(tc.v1, tc.v2, tc.n_cells);
    const auto levels = find_levels(pot, s);
    const auto fd = fd_spectrum(pot, FdGrid::padded(pot, 8000), 64);
    REQUIRE(fd.size() == levels.size());
    for (std::size_t k = 0; k < fd.size(); ++k) CHECK(std::abs(fd[k] - levels[k].energy) < 2e-3);
  }
}

TEST_CASE("every level lies in the union of the ground bands; none in the gap") {
  const SolverSettings s;
  const auto shallow = ground_bands(-1.25, kDefaultMass, s);
  const auto deep = ground_bands(-1.35, kDefaultMass, s);
  REQUIRE(shallow.size() == 1);
  REQUIRE(deep.size() == 1);
  const std::vector<Band> bands = {deep[0], shallow[0]};

  for (const auto& tc : oracles::table_cases()) {
    const auto levels = find_levels(Potential(tc.v1, tc.v2, tc.n_cells), s);
    int in_ground = 0;
    for (const Level& l : levels) {
      const Classification c = classify(l.energy, bands);
      CHECK(c.kind != Classification::Kind::in_gap);
      if (c.kind == Classification::Kind::in_band) ++in_ground;
    }
    CHECK(in_ground == tc.n_cells);
    if (tc.v1 == tc.v2) {
      for (int j = 0; j < tc.n_cells; ++j) CHECK(shallow[0].contains(levels[static_cast<std::size_t>(j)].energy));
    }
  }
}
