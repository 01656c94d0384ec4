#include "milnebands/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "milnebands/errors.hpp"

namespace milnebands {

FdGrid FdGrid::padded(const Potential& pot, int n_points, double pad) {
  return {-pad, pot.support_end() + pad, n_points};
}

void FdGrid::validate(const Potential& pot) const {
  if (n_points < 3) throw ValidationError("finite-difference grid needs >= 3 interior points");
  if (!(x_left < 0.0 && x_right > pot.support_end())) {
    throw ValidationError("finite-difference box must strictly contain [0, N pi]");
  }
}

Tridiagonal fd_hamiltonian(const Potential& pot, const FdGrid& grid) {
  grid.validate(pot);
  const double h = grid.spacing();
  const double kinetic = 1.0 / (2.0 * pot.mass() * h * h);
  const auto n = static_cast<std::size_t>(grid.n_points);
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -kinetic);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.x_left + static_cast<double>(k + 1) * h;
    t.diag[k] = 2.0 * kinetic + pot(x);
  }
  return t;
}

int sturm_count(const Tridiagonal& t, double energy) {
  int count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double coupling = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1] / q;
    q = t.diag[i] - energy - coupling;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_eigenvalue(const Tridiagonal& t, int k, double tol) {
  const std::size_t n = t.diag.size();
  if (k < 0 || static_cast<std::size_t>(k) >= n) {
    throw ValidationError("eigenvalue index out of range");
  }
  // Gershgorin bounds
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> fd_spectrum(const Potential& pot, const FdGrid& grid, int k_max) {
  const Tridiagonal t = fd_hamiltonian(pot, grid);
  const int bound = std::min(sturm_count(t, 0.0), k_max);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(bound, 0)));
  for (int k = 0; k < bound; ++k) out.push_back(tridiagonal_eigenvalue(t, k));
  return out;
}

void check_box(const Potential& pot, const FdGrid& grid, double extra, double tol) {
  const Tridiagonal base = fd_hamiltonian(pot, grid);
  if (sturm_count(base, 0.0) == 0) return;

  // extend by whole spacings so the original nodes are kept
  const double h = grid.spacing();
  const int added = static_cast<int>(std::ceil(extra / h));
  const FdGrid wide{grid.x_left - added * h, grid.x_right + added * h, grid.n_points + 2 * added};
  const double e0 = tridiagonal_eigenvalue(base, 0);
  const double e1 = tridiagonal_eigenvalue(fd_hamiltonian(pot, wide), 0);
  if (std::abs(e1 - e0) > tol) {
    throw BoxError("lowest eigenvalue moved by " + std::to_string(std::abs(e1 - e0)) +
                   " when the box was widened; increase padding");
  }
}

RichardsonEstimate richardson(const Potential& pot, const FdGrid& grid, int level_index) {
  const FdGrid g2 = grid.refined();
  const FdGrid g4 = g2.refined();
  RichardsonEstimate r;
  r.coarse = tridiagonal_eigenvalue(fd_hamiltonian(pot, grid), level_index);
  r.medium = tridiagonal_eigenvalue(fd_hamiltonian(pot, g2), level_index);
  r.fine = tridiagonal_eigenvalue(fd_hamiltonian(pot, g4), level_index);
  r.order = std::log2(std::abs((r.coarse - r.medium) / (r.medium - r.fine)));
  r.extrapolated = r.fine + (r.fine - r.medium) / 3.0;
  return r;
}

}  // namespace milnebands
