#include "milnebands/potential.hpp"

#include <cmath>
#include <string>

#include "milnebands/errors.hpp"

namespace milnebands {

const char* to_string(Segment s) {
  switch (s) {
    case Segment::exterior_left:
      return "exterior-left";
    case Segment::left_wells:
      return "left-wells";
    case Segment::right_wells:
      return "right-wells";
    case Segment::exterior_right:
      return "exterior-right";
  }
  return "unknown";
}

Potential::Potential(double v1, double v2, int n_cells, double mass)
    : v1_(v1), v2_(v2), n_cells_(n_cells), mass_(mass) {
  if (!std::isfinite(v1) || !std::isfinite(v2)) {
    throw ValidationError("potential depths must be finite");
  }
  if (n_cells < 2 || n_cells % 2 != 0) {
    throw ValidationError("n_cells must be an even integer >= 2, got " + std::to_string(n_cells));
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ValidationError("mass must be positive and finite");
  }
}

double Potential::operator()(double x) const {
  if (x < 0.0 || x > support_end()) return 0.0;
  const double s = std::sin(x);
  return (x <= junction() ? v1_ : v2_) * s * s;
}

Segment Potential::segment_of(double x) const {
  if (x < 0.0) return Segment::exterior_left;
  if (x < junction()) return Segment::left_wells;
  if (x <= support_end()) return Segment::right_wells;
  return Segment::exterior_right;
}

double SinSquaredLattice::operator()(double x) const {
  const double s = std::sin(x);
  return depth * s * s;
}

}  // namespace milnebands
