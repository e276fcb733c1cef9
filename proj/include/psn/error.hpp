#pragma once

#include <stdexcept>
#include <string>

namespace psn {

/// Precondition violated by the caller: bad dimensions, parameters out of range, malformed input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-posed computation failed in floating point, e.g. a singular block.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A principal block could not be factorized. Carries the offending set and a condition estimate.
class SingularBlockError : public NumericalError {
 public:
  SingularBlockError(const std::string& what, std::string set_description, double condition)
      : NumericalError(what), set_(std::move(set_description)), condition_(condition) {}

  const std::string& set_description() const noexcept { return set_; }
  double condition_estimate() const noexcept { return condition_; }

 private:
  std::string set_;
  double condition_;
};

/// The iteration is making the objective worse; usually the aggregation divisor b is too small.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace psn
