#pragma once

#include <stdexcept>
#include <string>

namespace milnebands {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented invariant (bad potential, settings, grid).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The numerics failed to produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The amplitude reached a non-positive value during integration.
class AmplitudeCollapseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The adaptive controller could not meet the requested tolerance.
class StepUnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A decaying tail was requested at a non-negative energy.
class NoBoundTailError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The tail phase did not settle within the allowed extent.
class TailDivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EnergyRangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The total boundary phase was not strictly increasing on the scan grid.
class NonMonotonePhaseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The finite-difference box truncates the bound-state tails.
class BoxError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A scan grid is too coarse to separate neighbouring roots.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace milnebands
