#include "milnebands/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "milnebands/errors.hpp"
#include "milnebands/parallel.hpp"

namespace milnebands {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_energy(double e) {
  std::ostringstream os;
  os.precision(12);
  os << e;
  return os.str();
}

}  // namespace

double Level::phase_residual() const {
  return std::abs(alpha + beta - (index_j + 1) * kPi);
}

PhaseSum total_phase(double energy, const Potential& pot, const SolverSettings& settings) {
  if (!(energy > pot.floor() && energy < 0.0)) {
    throw EnergyRangeError("energy " + fmt_energy(energy) + " outside (" +
                           fmt_energy(pot.floor()) + ", 0)");
  }
  const AmplitudePhaseState start{};
  const double centre = pot.junction();

  const AmplitudePhaseState left = integrate_interval(start, centre, 0.0, energy, pot, settings);
  const double left_tail = integrate_tail(left, 0.0, -1, energy, pot.mass(), settings);

  const AmplitudePhaseState right =
      integrate_interval(start, centre, pot.support_end(), energy, pot, settings);
  const double right_tail =
      integrate_tail(right, pot.support_end(), +1, energy, pot.mass(), settings);

  PhaseSum out;
  out.alpha = -left.p + left_tail;
  out.beta = right.p + right_tail;
  out.phi = out.alpha + out.beta;
  return out;
}

std::vector<Level> find_levels(const Potential& pot, const SolverSettings& settings,
                               const LevelSearch& search) {
  settings.validate();
  if (search.scan_points < 50) {
    throw ValidationError("scan_points must be >= 50");
  }
  const double lo = pot.floor() + search.edge_margin;
  const double hi = -search.edge_margin;
  if (!(lo < hi)) return {};

  const auto n = static_cast<std::size_t>(search.scan_points);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  auto energy_at = [&](std::size_t i) { return i + 1 == n ? hi : lo + step * static_cast<double>(i); };

  const std::vector<double> phi = parallel_map(
      n, [&](std::size_t i) { return total_phase(energy_at(i), pot, settings).phi; },
      search.threads);

  for (std::size_t i = 1; i < n; ++i) {
    if (!(phi[i] > phi[i - 1])) {
      throw NonMonotonePhaseError("total phase not increasing between E = " +
                                  fmt_energy(energy_at(i - 1)) + " and E = " +
                                  fmt_energy(energy_at(i)));
    }
  }

  struct Bracket {
    double lo, hi;
    int multiple;
  };
  std::vector<Bracket> brackets;
  for (std::size_t i = 1; i < n; ++i) {
    // integer multiples m with phi[i-1] < m pi <= phi[i]
    const auto first = static_cast<int>(std::floor(phi[i - 1] / kPi)) + 1;
    const auto last = static_cast<int>(std::floor(phi[i] / kPi));
    if (last - first >= 1) {
      throw ResolutionError("two quantization crossings between E = " +
                            fmt_energy(energy_at(i - 1)) + " and E = " + fmt_energy(energy_at(i)) +
                            "; increase scan_points");
    }
    if (last == first) brackets.push_back({energy_at(i - 1), energy_at(i), first});
  }

  std::vector<Level> levels;
  levels.reserve(brackets.size());
  for (const Bracket& b : brackets) {
    const double target = b.multiple * kPi;
    double a = b.lo;
    double c = b.hi;
    double fa = total_phase(a, pot, settings).phi - target;
    double fc = total_phase(c, pot, settings).phi - target;
    while (c - a > search.energy_tol) {
      const double mid = 0.5 * (a + c);
      const double fm = total_phase(mid, pot, settings).phi - target;
      if (fm == 0.0) {
        a = c = mid;
        fa = fc = 0.0;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        c = mid;
        fc = fm;
      }
    }
    // one regula-falsi step inside the final bracket
    double e = a;
    if (c > a && fc != fa) e = std::clamp(a - fa * (c - a) / (fc - fa), a, c);
    const PhaseSum ps = total_phase(e, pot, settings);
    levels.push_back({static_cast<int>(levels.size()), e, ps.alpha, ps.beta});
  }
  return levels;
}

std::vector<WavePoint> wavefunction(const Level& level, const Potential& pot,
                                    const SolverSettings& settings, std::span<const double> grid) {
  const double centre = pot.junction();
  const double multiple = std::round((level.alpha + level.beta) / kPi);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return grid[i] < grid[j]; });

  std::vector<WavePoint> out(grid.size());
  // Outside the support the phase still owed to infinity is integrated
  // directly: with alpha + beta = m pi, sin(p + alpha) is (-1)^(m+1) sin(r) on
  // the right and sin(r) on the left. Subtracting two O(1) phases there would
  // leave a rounding error that the growing amplitude blows up.
  auto emit = [&](std::size_t idx, const AmplitudePhaseState& s) {
    const double x = grid[idx];
    double f = 0.0;
    if (x > pot.support_end()) {
      const double r = integrate_tail(s, x, +1, level.energy, pot.mass(), settings);
      const double sign = std::fmod(multiple, 2.0) == 0.0 ? -1.0 : 1.0;
      f = sign * s.a * std::sin(r);
    } else if (x < 0.0) {
      f = s.a * std::sin(integrate_tail(s, x, -1, level.energy, pot.mass(), settings));
    } else {
      f = s.a * std::sin(s.p + level.alpha);
    }
    out[idx] = {x, f};
  };

  // rightward from the junction
  AmplitudePhaseState s{};
  double x = centre;
  for (std::size_t idx : order) {
    if (grid[idx] < centre) continue;
    s = integrate_interval(s, x, grid[idx], level.energy, pot, settings);
    x = grid[idx];
    emit(idx, s);
  }
  // leftward from the junction
  s = AmplitudePhaseState{};
  x = centre;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (grid[*it] >= centre) continue;
    s = integrate_interval(s, x, grid[*it], level.energy, pot, settings);
    x = grid[*it];
    emit(*it, s);
  }
  return out;
}

}  // namespace milnebands
