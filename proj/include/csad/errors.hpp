#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller handed in something that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel (eigensolver) failed to converge or produced non-finite output.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be positive definite is not.
class PsdViolation : public Error {
 public:
  PsdViolation(std::size_t pivot, double value)
      : Error("matrix is not positive definite: pivot " + std::to_string(pivot) +
              " is " + std::to_string(value)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Triangular or inverse solve hit a zero pivot.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// A solve that must converge (background fit) did not.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A runtime invariant check (debug mode) failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace csad
