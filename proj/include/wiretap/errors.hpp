#pragma once

#include <stdexcept>
#include <string>

namespace wiretap {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix shapes do not line up (or a trace length does not match n).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Main channel is numerically rank deficient.
class RankError : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented invariant (non-canonical state, bad range, NaN...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Parameters that cannot produce a meaningful experiment.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Toy-scale resource cap exceeded; the caller asked for an exact mixture
/// evaluation that is too large to run.
class CapError : public Error {
 public:
  using Error::Error;
};

}  // namespace wiretap
