#pragma once

// Amplitude-phase integration of the Schroedinger equation
//
//   F'' + 2m (E - V(x)) F = 0
//
// through the Milne-Pinney system
//
//   A'  = A_p
//   A_p' = A^-3 - 2m (E - V) A
//   p'  = A^-2
//
// so that A cos p and A sin p are two independent solutions with unit
// Wronskian. Everything here is a pure function of its arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "milnebands/errors.hpp"
#include "milnebands/potential.hpp"

namespace milnebands {

struct AmplitudePhaseState {
  double a = 1.0;
  double a_prime = 0.0;
  double p = 0.0;
};

struct StateDerivative {
  double da = 0.0;
  double da_prime = 0.0;
  double dp = 0.0;
};

struct SolverSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  /// Tail integration stops once a pi-long chunk adds less phase than this.
  double tail_phase_tol = 1e-12;
  /// Hard cap on tail length beyond the support edge.
  double tail_max_extent = 2.0e4;
  std::size_t max_steps = 2'000'000;

  void validate() const;
};

/// Right-hand side for a local value k2 = 2m (E - V(x)).
StateDerivative milne_rhs(const AmplitudePhaseState& s, double k2);

StateDerivative rhs(const AmplitudePhaseState& s, double x, double energy, const Potential& pot);

struct NoObserver {
  void operator()(double, const AmplitudePhaseState&) const {}
};

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 to_vec(const AmplitudePhaseState& s) { return {s.a, s.a_prime, s.p}; }
inline AmplitudePhaseState from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }

// Returns false when the amplitude is not strictly positive; trial stages of
// an oversized step may wander there and the step is then rejected.
template <class Field>
bool milne_field(const Field& v, double two_m, double energy, double x, const Vec3& y, Vec3& dy) {
  const double a = y[0];
  if (!(a > 0.0) || !std::isfinite(a)) return false;
  const double inv2 = 1.0 / (a * a);
  dy[0] = y[1];
  dy[1] = inv2 / a - two_m * (energy - v(x)) * a;
  dy[2] = inv2;
  return true;
}

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Adaptive Dormand-Prince integration of the amplitude-phase system from x0
/// to x1 (either direction) for an arbitrary potential callable v(x).
///
/// The observer sees every accepted step. Throws AmplitudeCollapseError if an
/// accepted amplitude is non-positive and StepUnderflowError if the controller
/// cannot meet the tolerance.
template <class Field, class Observer = NoObserver>
AmplitudePhaseState integrate_interval(const AmplitudePhaseState& state0, double x0, double x1,
                                       double energy, double mass, const Field& v,
                                       const SolverSettings& settings,
                                       const Observer& observe = {}) {
  using detail::Dopri5;
  using detail::Vec3;
  if (!(state0.a > 0.0)) {
    throw AmplitudeCollapseError("initial amplitude must be positive");
  }
  if (x1 == x0) return state0;

  const double two_m = 2.0 * mass;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  Vec3 y = detail::to_vec(state0);
  Vec3 k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
  Vec3 tmp{}, y_new{};
  detail::milne_field(v, two_m, energy, x0, y, k1);

  double x = x0;
  double h = dir * std::min(span, 0.05);
  std::size_t steps = 0;

  auto stage = [&](double xs, Vec3& out) { return detail::milne_field(v, two_m, energy, xs, tmp, out); };

  while (dir * (x1 - x) > 0.0) {
    if (++steps > settings.max_steps) {
      throw StepUnderflowError("step budget exhausted before reaching x = " + std::to_string(x1));
    }
    if (dir * (x + h - x1) > 0.0) h = x1 - x;
    if (std::abs(h) < 1e-13 * std::max(1.0, std::abs(x))) {
      throw StepUnderflowError("step size underflow at x = " + std::to_string(x));
    }

    bool ok = true;
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * Dopri5::a21 * k1[i];
    ok = ok && stage(x + Dopri5::c2 * h, k2);
    if (ok) {
      for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * (Dopri5::a31 * k1[i] + Dopri5::a32 * k2[i]);
      ok = stage(x + Dopri5::c3 * h, k3);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i)
        tmp[i] = y[i] + h * (Dopri5::a41 * k1[i] + Dopri5::a42 * k2[i] + Dopri5::a43 * k3[i]);
      ok = stage(x + Dopri5::c4 * h, k4);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i)
        tmp[i] = y[i] + h * (Dopri5::a51 * k1[i] + Dopri5::a52 * k2[i] + Dopri5::a53 * k3[i] +
                             Dopri5::a54 * k4[i]);
      ok = stage(x + Dopri5::c5 * h, k5);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i)
        tmp[i] = y[i] + h * (Dopri5::a61 * k1[i] + Dopri5::a62 * k2[i] + Dopri5::a63 * k3[i] +
                             Dopri5::a64 * k4[i] + Dopri5::a65 * k5[i]);
      ok = stage(x + h, k6);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i)
        y_new[i] = y[i] + h * (Dopri5::b1 * k1[i] + Dopri5::b3 * k3[i] + Dopri5::b4 * k4[i] +
                               Dopri5::b5 * k5[i] + Dopri5::b6 * k6[i]);
      tmp = y_new;
      ok = stage(x + h, k7);
    }
    if (!ok) {
      h *= 0.25;
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double e = h * (Dopri5::e1 * k1[i] + Dopri5::e3 * k3[i] + Dopri5::e4 * k4[i] +
                            Dopri5::e5 * k5[i] + Dopri5::e6 * k6[i] + Dopri5::e7 * k7[i]);
      const double scale =
          settings.abs_tol + settings.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / 3.0);
    if (!std::isfinite(err)) {
      h *= 0.25;
      continue;
    }

    if (err <= 1.0) {
      if (!(y_new[0] > 0.0)) {
        throw AmplitudeCollapseError("amplitude collapsed at x = " + std::to_string(x + h));
      }
      if (dir * (y_new[2] - y[2]) < 0.0) {
        throw NumericalError("phase moved against the integration direction at x = " +
                             std::to_string(x + h));
      }
      x = (dir * (x1 - (x + h)) <= 0.0) ? x1 : x + h;
      y = y_new;
      k1 = k7;
      observe(x, detail::from_vec(y));
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return detail::from_vec(y);
}

/// Integrates across a joined-lattice potential, restarting the step
/// controller at each kink of V (x = 0, N pi/2, N pi).
AmplitudePhaseState integrate_interval(const AmplitudePhaseState& state0, double x0, double x1,
                                       double energy, const Potential& pot,
                                       const SolverSettings& settings);

struct TailResult {
  /// Phase magnitude accumulated from the start point to truncation.
  double phase = 0.0;
  double extent = 0.0;
  std::vector<double> chunk_increments;
};

/// Integrates a field-free (V = 0) decaying tail in pi-long chunks until one
/// chunk adds less than tail_phase_tol. direction is +1 (rightward) or -1.
TailResult integrate_tail_traced(const AmplitudePhaseState& state0, double x_start, int direction,
                                 double energy, double mass, const SolverSettings& settings);

inline double integrate_tail(const AmplitudePhaseState& state0, double x_start, int direction,
                             double energy, double mass, const SolverSettings& settings) {
  return integrate_tail_traced(state0, x_start, direction, energy, mass, settings).phase;
}

struct PathPoint {
  double x;
  AmplitudePhaseState state;
};

/// Fixed-step classical RK4 path on steps+1 equally spaced points. Used for
/// dense residual checks independent of the adaptive controller.
template <class Field>
std::vector<PathPoint> sample_path(const AmplitudePhaseState& state0, double x0, double x1,
                                   std::size_t steps, double energy, double mass, const Field& v) {
  using detail::Vec3;
  std::vector<PathPoint> out;
  out.reserve(steps + 1);
  const double two_m = 2.0 * mass;
  const double h = (x1 - x0) / static_cast<double>(steps);
  Vec3 y = detail::to_vec(state0);
  out.push_back({x0, state0});
  Vec3 k1{}, k2{}, k3{}, k4{}, t{};
  auto f = [&](double x, const Vec3& in, Vec3& o) {
    if (!detail::milne_field(v, two_m, energy, x, in, o)) {
      throw AmplitudeCollapseError("amplitude collapsed at x = " + std::to_string(x));
    }
  };
  for (std::size_t n = 0; n < steps; ++n) {
    const double x = x0 + static_cast<double>(n) * h;
    f(x, y, k1);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    f(x + 0.5 * h, t, k2);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    f(x + 0.5 * h, t, k3);
    for (int i = 0; i < 3; ++i) t[i] = y[i] + h * k3[i];
    f(x + h, t, k4);
    for (int i = 0; i < 3; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    out.push_back({x0 + static_cast<double>(n + 1) * h, detail::from_vec(y)});
  }
  return out;
}

}  // namespace milnebands
