#pragma once

#include <span>
#include <vector>

#include "milnebands/milne.hpp"
#include "milnebands/potential.hpp"

namespace milnebands {

/// Boundary phases of the two integrations started at the junction with
/// A = 1, A' = 0, p = 0. alpha is the (positive) phase gathered leftward out
/// to the converged left tail, beta the phase gathered rightward.
struct PhaseSum {
  double phi = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// A bound state: alpha + beta = (index_j + 1) pi.
struct Level {
  int index_j = 0;
  double energy = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  double phase_residual() const;
};

struct LevelSearch {
  int scan_points = 400;
  /// Distance kept from min(v1, v2) and from E = 0.
  double edge_margin = 1e-6;
  double energy_tol = 1e-10;
  unsigned threads = 0;
};

/// Requires min(v1, v2) < energy < 0.
PhaseSum total_phase(double energy, const Potential& pot, const SolverSettings& settings);

/// Scans the total phase on a uniform grid over (min(v1,v2), 0), brackets
/// every crossing of an integer multiple of pi and refines it. Levels come
/// back in ascending energy with j = 0, 1, ... in that order.
///
/// Throws ResolutionError when one grid interval holds two crossings and
/// NonMonotonePhaseError when the scanned phase is not strictly increasing.
std::vector<Level> find_levels(const Potential& pot, const SolverSettings& settings,
                               const LevelSearch& search = {});

inline std::vector<Level> find_levels(const Potential& pot, const SolverSettings& settings,
                                      int scan_points) {
  LevelSearch search;
  search.scan_points = scan_points;
  return find_levels(pot, settings, search);
}

struct WavePoint {
  double x;
  double f;
};

/// F(x) = A(x) sin(p(x) + alpha), normalised so that F = sin(alpha) and
/// F' = cos(alpha) at the junction. Outside the support the remaining tail
/// phase is integrated directly so F decays instead of amplifying rounding
/// error. Points are returned in grid order.
std::vector<WavePoint> wavefunction(const Level& level, const Potential& pot,
                                    const SolverSettings& settings, std::span<const double> grid);

}  // namespace milnebands
