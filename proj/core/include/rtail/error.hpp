#pragma once

#include <stdexcept>
#include <string>

namespace rtail {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation (bad parameter,
/// truncation mismatch, u outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The queue is not stable (rho >= 1) or a geometric scale is >= 1.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or produced values that violate
/// a provable invariant (e.g. a negative probability beyond round-off).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The model falls outside the regularly varying assumptions needed for the
/// tail asymptotics (both laws light-tailed).
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace rtail
