#pragma once

#include <stdexcept>
#include <string>

namespace emv {

/// A precondition on the arguments was violated (a >= b, x <= 0, w below the shift floor, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested evaluation would leave the binary64 range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Adaptive quadrature gave up before meeting its tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// A bracketing search found no sign change.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace emv
