#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace specanom {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs does not hold (wrong kind, order, kernel...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Analytic continuation or a numerical extraction did not meet its target.
class ContinuationError : public Error {
 public:
  using Error::Error;
};

/// A requested symbol-calculus operation is outside the supported class.
class SymbolError : public Error {
 public:
  using Error::Error;
};

}  // namespace specanom
