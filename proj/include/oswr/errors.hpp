#pragma once

#include <stdexcept>
#include <string>

namespace oswr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, misaligned grids, malformed config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation that could not produce a finite, meaningful result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Zero or tiny pivot, or evaluation at a singular point.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The transmission operator resonates: the convergence factor has a pole.
class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Time stepping produced a non-finite value.
class StabilityError : public NumericalError {
 public:
  StabilityError(const std::string& what, int step) : NumericalError(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// The Robin boundary row cannot be solved for the boundary unknown.
class ClosureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace detail

}  // namespace oswr
