#pragma once

#include <numbers>

namespace milnebands {

/// Effective mass that reproduces the tabulated level and band data.
inline constexpr double kDefaultMass = 2.0;

enum class Segment { exterior_left, left_wells, right_wells, exterior_right };

const char* to_string(Segment s);

/// Two truncated sin^2 lattices of period pi joined at x = N*pi/2.
///
/// V(x) = v1 sin^2 x on [0, N pi/2], v2 sin^2 x on [N pi/2, N pi], and zero
/// elsewhere. N must be even so that both halves hold N/2 whole cells and the
/// junction is continuous.
class Potential {
 public:
  Potential(double v1, double v2, int n_cells, double mass = kDefaultMass);

  double operator()(double x) const;
  Segment segment_of(double x) const;

  double v1() const { return v1_; }
  double v2() const { return v2_; }
  int n_cells() const { return n_cells_; }
  double mass() const { return mass_; }

  double junction() const { return 0.5 * n_cells_ * std::numbers::pi; }
  double support_end() const { return n_cells_ * std::numbers::pi; }
  /// min(v1, v2)
  double floor() const { return v1_ < v2_ ? v1_ : v2_; }

 private:
  double v1_;
  double v2_;
  int n_cells_;
  double mass_;
};

inline double evaluate(const Potential& pot, double x) { return pot(x); }
inline Segment segment_of(const Potential& pot, double x) { return pot.segment_of(x); }

/// Infinite lattice v sin^2 x, used for single-cell Floquet quantities.
struct SinSquaredLattice {
  double depth;
  double operator()(double x) const;
};

struct FreeSpace {
  double operator()(double) const { return 0.0; }
};

}  // namespace milnebands
