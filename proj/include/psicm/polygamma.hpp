#ifndef PSICM_POLYGAMMA_HPP
#define PSICM_POLYGAMMA_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "psicm/bernoulli.hpp"
#include "psicm/errors.hpp"

namespace psicm {

/// Tuning of the recurrence-plus-asymptotic evaluator.
struct EvalConfig {
  /// Arguments are pushed above this before the asymptotic series is used.
  /// Unset means 12 + k.
  std::optional<double> shift_floor;
  unsigned asymptotic_terms = 14;
  double target_rel_err = 1e-13;
  unsigned max_order = 40;

  double floor_for(unsigned k) const { return shift_floor.value_or(12.0 + static_cast<double>(k)); }

  void validate() const {
    if (shift_floor && !(*shift_floor >= 1.0)) {
      throw DomainError("EvalConfig: shift_floor must be >= 1");
    }
    if (asymptotic_terms < 2) {
      throw DomainError("EvalConfig: asymptotic_terms must be >= 2");
    }
    if (asymptotic_terms > 40) {
      throw CapacityError("EvalConfig: asymptotic_terms above 40 not supported");
    }
    if (!(target_rel_err > 0.0)) {
      throw DomainError("EvalConfig: target_rel_err must be positive");
    }
  }
};

inline double factorial(unsigned n) {
  if (n > 170) {
    throw CapacityError("factorial: " + std::to_string(n) + "! overflows double");
  }
  double f = 1.0;
  for (unsigned j = 2; j <= n; ++j) {
    f *= static_cast<double>(j);
  }
  return f;
}

namespace detail {

// B_2, B_4, ..., B_80 as doubles.
inline const std::array<double, 41>& even_bernoulli() {
  static const std::array<double, 41> values = [] {
    std::array<double, 41> out{};
    for (unsigned j = 1; j <= 40; ++j) {
      out[j] = bernoulli_double(2 * j);
    }
    return out;
  }();
  return values;
}

// Asymptotic series for psi^(k)(y), y large. Returns |psi^(k)(y)| for k >= 1
// and psi(y) for k = 0.
inline double polygamma_asymptotic(unsigned k, double y, const EvalConfig& cfg) {
  const auto& b = even_bernoulli();
  const double inv_y2 = 1.0 / (y * y);
  if (k == 0) {
    double tail = 0.0;
    double ypow = inv_y2;
    for (unsigned j = 1; j <= cfg.asymptotic_terms; ++j) {
      const double term = b[j] / (2.0 * j) * ypow;
      tail += term;
      if (std::abs(term) < 0.01 * cfg.target_rel_err * std::abs(tail)) {
        break;
      }
      ypow *= inv_y2;
    }
    return std::log(y) - 0.5 / y - tail;
  }
  const double kd = static_cast<double>(k);
  double bracket = 1.0 + kd / (2.0 * y);
  double ratio = 1.0;
  for (unsigned j = 1; j <= cfg.asymptotic_terms; ++j) {
    const double jj = static_cast<double>(j);
    ratio *= (kd + 2.0 * jj - 2.0) * (kd + 2.0 * jj - 1.0) / ((2.0 * jj - 1.0) * (2.0 * jj)) * inv_y2;
    const double term = b[j] * ratio;
    bracket += term;
    if (std::abs(term) < 0.01 * cfg.target_rel_err * std::abs(bracket)) {
      break;
    }
  }
  return factorial(k - 1) / std::pow(y, kd) * bracket;
}

}  // namespace detail

/// Polygamma function psi^(k)(x) for x > 0. Upward recurrence moves the
/// argument above the shift floor, then the asymptotic series finishes.
/// For k >= 1 the recurrence terms and the asymptotic part share one sign,
/// so the only cancellation is for k = 0 near the positive root of psi.
inline double polygamma(unsigned k, double x, const EvalConfig& cfg = {}) {
  detail::require_finite(x, "polygamma");
  if (!(x > 0.0)) {
    throw DomainError("polygamma: x must be positive");
  }
  if (k > cfg.max_order) {
    throw CapacityError("polygamma: order " + std::to_string(k) + " exceeds maximum " +
                        std::to_string(cfg.max_order));
  }
  cfg.validate();

  const double floor = cfg.floor_for(k);
  const double shifts = x < floor ? std::ceil(floor - x) : 0.0;
  const unsigned n = static_cast<unsigned>(shifts);
  const double asym = detail::polygamma_asymptotic(k, x + shifts, cfg);

  // Smallest terms first.
  double sum = 0.0;
  const double p = static_cast<double>(k + 1);
  for (unsigned j = n; j-- > 0;) {
    sum += std::pow(x + static_cast<double>(j), -p);
  }
  if (k == 0) {
    return asym - sum;
  }
  const double magnitude = asym + factorial(k) * sum;
  return (k % 2 == 1) ? magnitude : -magnitude;
}

inline double digamma(double x, const EvalConfig& cfg = {}) { return polygamma(0, x, cfg); }

/// psi^(k)(x+1) - psi^(k)(x) - (-1)^k k!/x^(k+1); zero in exact arithmetic.
inline double recurrence_shift(unsigned k, double x, const EvalConfig& cfg = {}) {
  const double jump = factorial(k) / std::pow(x, static_cast<double>(k + 1));
  const double signed_jump = (k % 2 == 0) ? jump : -jump;
  return polygamma(k, x + 1.0, cfg) - polygamma(k, x, cfg) - signed_jump;
}

struct BoundsPair {
  double lower;
  double upper;

  bool strictly_contains(double v) const { return lower < v && v < upper; }
};

/// Envelope (k-1)!/x^k + k!/(2x^(k+1)) < |psi^(k)(x)| < (k-1)!/x^k + k!/x^(k+1).
inline BoundsPair polygamma_bounds(unsigned k, double x) {
  if (k == 0) {
    throw DomainError("polygamma_bounds: order must be >= 1");
  }
  detail::require_finite(x, "polygamma_bounds");
  if (!(x > 0.0)) {
    throw DomainError("polygamma_bounds: x must be positive");
  }
  const double lead = factorial(k - 1) / std::pow(x, static_cast<double>(k));
  const double next = factorial(k) / std::pow(x, static_cast<double>(k + 1));
  return {lead + 0.5 * next, lead + next};
}

}  // namespace psicm

#endif
