#pragma once

#include <stdexcept>
#include <string>

namespace qpencil {

/// Invalid input data: malformed measures, angles out of range, points outside a domain.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold (e.g. base point not in the support).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The spectral parameter is an eigenvalue (or zero where zero is excluded).
class SingularParameterError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A root of the scanned function lies within tolerance of a window boundary.
class BoundaryCollisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Root count certification or an iterative refinement did not converge.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qpencil
