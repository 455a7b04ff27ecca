#ifndef PSICM_ERRORS_HPP
#define PSICM_ERRORS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace psicm {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request exceeds a configured table size or order limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numerical procedure failed to reach its accuracy target.
/// Carries the best partial value obtained.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double partial_value, double error_estimate)
      : std::runtime_error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

namespace detail {

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

}  // namespace detail

}  // namespace psicm

#endif
