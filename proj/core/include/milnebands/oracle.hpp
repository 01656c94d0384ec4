#pragma once

#include <span>
#include <vector>

#include "milnebands/potential.hpp"

namespace milnebands {

/// Uniform finite-difference box with Dirichlet ends. The n_points interior
/// nodes sit at x_left + k h, k = 1..n_points, with h = (x_right - x_left) / (n_points + 1).
struct FdGrid {
  double x_left = 0.0;
  double x_right = 0.0;
  int n_points = 0;

  double spacing() const { return (x_right - x_left) / (n_points + 1); }
  /// Same box with the spacing halved (2n + 1 interior nodes).
  FdGrid refined() const { return {x_left, x_right, 2 * n_points + 1}; }

  /// Box [-pad, N pi + pad].
  static FdGrid padded(const Potential& pot, int n_points, double pad = 12.0);

  /// Throws ValidationError unless the box strictly contains the support and
  /// has at least 3 interior nodes.
  void validate(const Potential& pot) const;
};

/// Symmetric tridiagonal matrix: diag[0..n), off[0..n-1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Three-point discretisation of -F''/(2m) + V F.
Tridiagonal fd_hamiltonian(const Potential& pot, const FdGrid& grid);

/// Number of eigenvalues strictly below `energy` (Sturm sequence / LDL^T inertia).
int sturm_count(const Tridiagonal& t, double energy);

/// The k-th (0-based) eigenvalue by bisection on the Sturm count.
double tridiagonal_eigenvalue(const Tridiagonal& t, int k, double tol = 1e-10);

/// Up to k_max negative eigenvalues, ascending.
std::vector<double> fd_spectrum(const Potential& pot, const FdGrid& grid, int k_max);

/// Recomputes the lowest eigenvalue on the same lattice extended by `extra`
/// on both sides; throws BoxError if it moves by more than `tol`.
void check_box(const Potential& pot, const FdGrid& grid, double extra = 6.0, double tol = 1e-6);

struct RichardsonEstimate {
  /// Eigenvalue at spacings h, h/2, h/4.
  double coarse = 0.0;
  double medium = 0.0;
  double fine = 0.0;
  double order = 0.0;
  /// fine + (fine - medium) / 3, the h^2-extrapolated value
  double extrapolated = 0.0;
};

/// Empirical convergence order of eigenvalue `level_index` from three
/// successive halvings of the spacing.
RichardsonEstimate richardson(const Potential& pot, const FdGrid& grid, int level_index);

}  // namespace milnebands
