#include "milnebands/milne.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace milnebands {

void SolverSettings::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(rel_tol)) throw ValidationError("rel_tol must be positive");
  if (!positive(abs_tol)) throw ValidationError("abs_tol must be positive");
  if (!positive(tail_phase_tol)) throw ValidationError("tail_phase_tol must be positive");
  if (!positive(tail_max_extent)) throw ValidationError("tail_max_extent must be positive");
  if (max_steps == 0) throw ValidationError("max_steps must be positive");
}

StateDerivative milne_rhs(const AmplitudePhaseState& s, double k2) {
  if (!(s.a > 0.0)) throw AmplitudeCollapseError("amplitude must be positive");
  const double inv2 = 1.0 / (s.a * s.a);
  return {s.a_prime, inv2 / s.a - k2 * s.a, inv2};
}

StateDerivative rhs(const AmplitudePhaseState& s, double x, double energy, const Potential& pot) {
  return milne_rhs(s, 2.0 * pot.mass() * (energy - pot(x)));
}

AmplitudePhaseState integrate_interval(const AmplitudePhaseState& state0, double x0, double x1,
                                       double energy, const Potential& pot,
                                       const SolverSettings& settings) {
  if (x0 == x1) return state0;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  std::vector<double> stops;
  for (double b : {0.0, pot.junction(), pot.support_end()}) {
    if (dir * (b - x0) > 0.0 && dir * (x1 - b) > 0.0) stops.push_back(b);
  }
  if (dir < 0.0) std::reverse(stops.begin(), stops.end());
  stops.push_back(x1);

  AmplitudePhaseState s = state0;
  double x = x0;
  for (double stop : stops) {
    s = integrate_interval(s, x, stop, energy, pot.mass(), pot, settings);
    x = stop;
  }
  return s;
}

TailResult integrate_tail_traced(const AmplitudePhaseState& state0, double x_start, int direction,
                                 double energy, double mass, const SolverSettings& settings) {
  if (!(energy < 0.0)) {
    throw NoBoundTailError("tail integration needs E < 0, got E = " + std::to_string(energy));
  }
  if (direction != 1 && direction != -1) {
    throw ValidationError("tail direction must be +1 or -1");
  }
  const double chunk = direction * std::numbers::pi;
  TailResult out;
  AmplitudePhaseState s = state0;
  double x = x_start;
  while (true) {
    if (out.extent >= settings.tail_max_extent) {
      throw TailDivergenceError("tail phase not converged within " +
                                std::to_string(settings.tail_max_extent) + " at E = " +
                                std::to_string(energy));
    }
    const AmplitudePhaseState next =
        integrate_interval(s, x, x + chunk, energy, mass, FreeSpace{}, settings);
    const double dp = std::abs(next.p - s.p);
    out.chunk_increments.push_back(dp);
    s = next;
    x += chunk;
    out.extent += std::numbers::pi;
    if (dp < settings.tail_phase_tol) break;
  }
  out.phase = std::abs(s.p - state0.p);
  return out;
}

}  // namespace milnebands
