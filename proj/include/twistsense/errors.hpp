#pragma once

#include <stdexcept>
#include <string>

namespace twistsense {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user-facing arguments: unknown tags, out-of-range fractions, wrong
/// engine for a spin count. The CLI maps these to a usage exit code.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class WrongMethod : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class SingularParameter : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A numerical precondition or postcondition failed (non-Hermitian generator,
/// unnormalized state, mismatched dimensions).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// Truncated Fock simulation leaked population into the top levels.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Threshold search interval does not bracket a change of the predicate.
class BracketingError : public Error {
 public:
  using Error::Error;
};

}  // namespace twistsense
