#pragma once

#include <stdexcept>

namespace esgbo {

// Invalid domain data: bad prices, out-of-range scores, mismatched dimensions.
class MalformedInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid configuration: bad bounds, unknown keys, empty grids.
class MalformedConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Portfolio variance is zero along the requested weights.
class DegenerateRiskError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix factorization failed even after jitter escalation.
class NumericalConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace esgbo
