#include "milnebands/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "milnebands/errors.hpp"
#include "milnebands/parallel.hpp"

namespace milnebands {

double CellQuantities::discriminant() const { return u * std::cos(gamma); }

CellQuantities cell_quantities(double well_depth, double energy, double mass,
                               const SolverSettings& settings, double cell_start) {
  if (!(mass > 0.0)) throw ValidationError("mass must be positive");
  const AmplitudePhaseState end =
      integrate_interval(AmplitudePhaseState{}, cell_start, cell_start + std::numbers::pi, energy,
                         mass, SinSquaredLattice{well_depth}, settings);
  return {end.a, end.p};
}

std::vector<BandEdge> find_band_edges(double well_depth, double mass, double e_min, double e_max,
                                      const SolverSettings& settings, const EdgeSearch& search) {
  if (!(e_min < e_max)) throw ValidationError("find_band_edges needs e_min < e_max");
  if (search.scan_points < 2) throw ValidationError("edge scan needs at least 2 points");
  settings.validate();

  const auto n = static_cast<std::size_t>(search.scan_points);
  const double step = (e_max - e_min) / static_cast<double>(n - 1);
  auto energy_at = [&](std::size_t i) { return i + 1 == n ? e_max : e_min + step * static_cast<double>(i); };
  auto disc = [&](double e) { return cell_quantities(well_depth, e, mass, settings).discriminant(); };

  const std::vector<double> d = parallel_map(
      n, [&](std::size_t i) { return disc(energy_at(i)); }, search.threads);

  std::vector<BandEdge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const bool cross_plus = (d[i - 1] - 1.0) * (d[i] - 1.0) < 0.0 || d[i] == 1.0;
    const bool cross_minus = (d[i - 1] + 1.0) * (d[i] + 1.0) < 0.0 || d[i] == -1.0;
    if (cross_plus && cross_minus) {
      throw ResolutionError("band edges of both branches between E = " +
                            std::to_string(energy_at(i - 1)) + " and E = " +
                            std::to_string(energy_at(i)) + "; increase scan_points");
    }
    if (!cross_plus && !cross_minus) continue;
    const int branch = cross_plus ? 1 : -1;

    double a = energy_at(i - 1);
    double c = energy_at(i);
    double fa = d[i - 1] - branch;
    while (c - a > search.energy_tol) {
      const double mid = 0.5 * (a + c);
      const double fm = disc(mid) - branch;
      if (fm == 0.0) {
        a = c = mid;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        c = mid;
      }
    }
    edges.push_back({0.5 * (a + c), branch, well_depth});
  }

  if (search.ground_only) {
    const std::vector<Band> bands = assemble_bands(edges, mass, settings);
    if (bands.empty()) return {};
    return {bands.front().lower, bands.front().upper};
  }
  return edges;
}

std::vector<Band> assemble_bands(std::span<const BandEdge> edges, double mass,
                                 const SolverSettings& settings) {
  std::vector<Band> bands;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const BandEdge& lo = edges[i];
    const BandEdge& hi = edges[i + 1];
    if (lo.well_depth != hi.well_depth) continue;
    const double mid = 0.5 * (lo.energy + hi.energy);
    if (std::abs(cell_quantities(lo.well_depth, mid, mass, settings).discriminant()) < 1.0) {
      bands.push_back({lo, hi});
      ++i;
    }
  }
  return bands;
}

std::vector<Band> ground_bands(double well_depth, double mass, const SolverSettings& settings,
                               const EdgeSearch& search) {
  if (!(well_depth < 0.0)) return {};
  EdgeSearch ground = search;
  ground.ground_only = true;
  const auto edges = find_band_edges(well_depth, mass, well_depth, -1e-6, settings, ground);
  if (edges.size() != 2) return {};
  return {Band{edges[0], edges[1]}};
}

const char* to_string(Classification::Kind kind) {
  switch (kind) {
    case Classification::Kind::in_band:
      return "in-band";
    case Classification::Kind::in_gap:
      return "in-gap";
    case Classification::Kind::below_all:
      return "below-all";
    case Classification::Kind::above_all:
      return "above-all";
  }
  return "unknown";
}

Classification classify(double energy, std::span<const Band> bands) {
  using Kind = Classification::Kind;
  if (bands.empty() || energy < bands.front().lower.energy) return {Kind::below_all, -1};
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (bands[i].contains(energy)) return {Kind::in_band, static_cast<int>(i)};
  }
  if (energy > bands.back().upper.energy) return {Kind::above_all, -1};
  return {Kind::in_gap, -1};
}

}  // namespace milnebands
