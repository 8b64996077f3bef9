#pragma once

#include <stdexcept>
#include <string>

namespace qex {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic produced a result that should be impossible (non-exact
/// division, broken length additivity). Always indicates a bug.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration requested above the configured size bound.
class EnumerationBoundError : public Error {
 public:
  using Error::Error;
};

/// Contour nodes hit (or came too close to) a pole of the integrand.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// A numerical method failed to reach its requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qex
