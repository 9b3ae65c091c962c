#pragma once

#include <stdexcept>
#include <string>

namespace hit {

/// Out-of-range or otherwise unusable parameter value.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector or matrix sizes that do not line up with the intention space.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every hypothesis received zero likelihood; the caller owns the reset policy.
class DegenerateEvidence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN/inf where a finite value is required, or a covariance that lost PSD.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hit
