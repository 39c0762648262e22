#pragma once

#include <stdexcept>
#include <string>

namespace cloudoracle {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller-supplied data is malformed or violates a documented precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix lengths disagree with the oracle / topology they are used with.
class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

/// No pair of storage data centers satisfies the distance constraint.
class InfeasibleTopology : public InputError {
 public:
  using InputError::InputError;
};

/// A drift whose motion vector vanishes numerically.
class DegenerateDrift : public InputError {
 public:
  using InputError::InputError;
};

/// Serialized data is unreadable: bad magic, wrong version, truncation.
class FormatError : public InputError {
 public:
  using InputError::InputError;
};

/// Internal failure while assembling an oracle (e.g. a zero plane row).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cloudoracle
