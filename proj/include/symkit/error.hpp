#pragma once

#include <stdexcept>
#include <string>

namespace symkit {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the domain of a map (log branch, singular matrix,
/// scaling budget).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A result failed its numerical post-verification.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace symkit
