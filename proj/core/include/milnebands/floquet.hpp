#pragma once

#include <span>
#include <vector>

#include "milnebands/milne.hpp"

namespace milnebands {

/// Amplitude u and phase gamma after one period cell, started from
/// A = 1, A' = 0, p = 0. Band edges sit where u cos(gamma) = +-1.
struct CellQuantities {
  double u = 1.0;
  double gamma = 0.0;

  double discriminant() const;
};

CellQuantities cell_quantities(double well_depth, double energy, double mass,
                               const SolverSettings& settings, double cell_start = 0.0);

struct BandEdge {
  double energy = 0.0;
  /// +1 or -1: the value of u cos(gamma) at the edge
  int branch = 0;
  double well_depth = 0.0;
};

struct Band {
  BandEdge lower;
  BandEdge upper;

  bool contains(double e) const { return e >= lower.energy && e <= upper.energy; }
};

struct EdgeSearch {
  int scan_points = 2000;
  /// Report only the edges of the lowest band in range.
  bool ground_only = true;
  double energy_tol = 1e-10;
  unsigned threads = 0;
};

/// Locates the energies in [e_min, e_max] where u cos(gamma) crosses +1 or -1.
/// Throws ResolutionError if one grid interval holds crossings of both lines.
std::vector<BandEdge> find_band_edges(double well_depth, double mass, double e_min, double e_max,
                                      const SolverSettings& settings,
                                      const EdgeSearch& search = {});

/// Pairs consecutive edges that enclose |u cos(gamma)| < 1.
std::vector<Band> assemble_bands(std::span<const BandEdge> edges, double mass,
                                 const SolverSettings& settings);

/// Ground band of the lattice v sin^2 x, searched over (v, 0). Empty for v >= 0
/// or when no band lies below zero.
std::vector<Band> ground_bands(double well_depth, double mass, const SolverSettings& settings,
                               const EdgeSearch& search = {});

struct Classification {
  enum class Kind { in_band, in_gap, below_all, above_all };
  Kind kind = Kind::below_all;
  /// Band index for in_band, -1 otherwise.
  int band_index = -1;
};

const char* to_string(Classification::Kind kind);

/// Closed-interval membership against bands sorted by energy.
Classification classify(double energy, std::span<const Band> bands);

}  // namespace milnebands
