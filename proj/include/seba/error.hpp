#pragma once

#include <stdexcept>
#include <string>

namespace seba {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured memory/work cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// The spectral parameter coincides with a lattice norm in the window.
class SingularEigenvalue : public Error {
 public:
  using Error::Error;
};

/// Two distinct integer keys produced numerically indistinguishable norms
/// under a geometry flagged irrational.
class NormCollision : public Error {
 public:
  using Error::Error;
};

/// The truncated secular function does not change sign across a gap.
class NonBracketing : public Error {
 public:
  using Error::Error;
};

/// Input data failed a validation check (e.g. a sequence that does not interlace).
class ValidationFailure : public Error {
 public:
  using Error::Error;
};

/// Too few sample points for a statistic.
class InsufficientSample : public Error {
 public:
  using Error::Error;
};

}  // namespace seba
