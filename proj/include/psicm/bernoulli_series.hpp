#ifndef PSICM_BERNOULLI_SERIES_HPP
#define PSICM_BERNOULLI_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psicm/bernoulli.hpp"
#include "psicm/errors.hpp"
#include "psicm/kernel.hpp"

namespace psicm {

// Closed forms of the two Bernoulli power series
//   S1(t) = sum_{k>=1} B_2k t^(2k-1)/(2k-1)!  = 1/2 - delta(t)
//   S2(t) = sum_{k>=0} B_2k+2 t^(2k+2)/(2k+2)! = t/(e^t - 1) - 1 + t/2
// valid for every t > 0. The power series themselves only converge for
// t < 2 pi and are evaluated separately as a cross-check.

inline double series_odd(double t) {
  detail::require_positive_t(t, "series_odd");
  if (t < detail::kDeltaSeriesCutoff) {
    return detail::delta_series_sum(t);
  }
  return 0.5 - delta(t);
}

inline double series_even(double t) {
  detail::require_positive_t(t, "series_even");
  if (t < detail::kDeltaSeriesCutoff) {
    // t/(e^t-1) - 1 + t/2 = sum_{k>=1} B_2k t^2k/(2k)!, from the delta coefficients.
    const auto& c = detail::delta_series_coefficients();
    const double t2 = t * t;
    double acc = 0.0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
      acc = acc * t2 + c[k] / static_cast<double>(2 * k);
    }
    return acc * t2;
  }
  return t / std::expm1(t) - 1.0 + 0.5 * t;
}

/// Gaps in 0 < S1(t) < 1/2 and max(0, t/2 - 1) < S2(t) < t/2, each formed
/// without subtracting nearly equal numbers. Long double keeps e^-t
/// representable well past t = 1e3, where the double gaps underflow.
struct SeriesMargins {
  long double odd_lower;
  long double odd_upper;
  long double even_lower;
  long double even_upper;

  long double min() const { return std::min({odd_lower, odd_upper, even_lower, even_upper}); }
};

inline SeriesMargins series_margins(double t) {
  detail::require_positive_t(t, "series_margins");
  const long double tl = t;
  SeriesMargins m{};
  m.odd_lower = series_odd(t);
  if (t < detail::kDeltaSeriesCutoff) {
    m.odd_upper = delta(t);
    m.even_upper = 0.5L * tl - series_even(t);
  } else {
    const long double q = std::exp(-tl);
    const long double one_minus_q = -std::expm1(-tl);
    m.odd_upper = q * ((tl - 1.0L) + q) / (one_minus_q * one_minus_q);
    m.even_upper = 1.0L - tl / std::expm1(tl);
  }
  // S2 - (t/2 - 1) = t/(e^t - 1) once the lower bound is t/2 - 1.
  m.even_lower = t <= 2.0 ? static_cast<long double>(series_even(t)) : tl / std::expm1(tl);
  return m;
}

struct TruncatedSeries {
  double value;
  unsigned terms;
  /// |last included term| / |partial sum|.
  double last_term_ratio;
  bool converged;
};

/// Truncation settings for the series cross-check.
struct TruncationRule {
  double relative_tail = 1e-16;
  unsigned max_terms = 400;
  mp_bitcnt_t precision_bits = 256;
};

namespace detail {

inline const BernoulliTable& series_bernoulli_table() {
  static const BernoulliTable table(800);
  return table;
}

// sum_{k>=1} B_2k t^(2k - offset) / (2k - offset)!, offset in {0, 1}, in
// extended precision.
inline TruncatedSeries truncated_bernoulli_series(double t, unsigned offset, const TruncationRule& rule) {
  if (t >= 2.0 * std::numbers::pi) {
    throw DomainError("truncated series: t outside the disk of convergence |t| < 2 pi");
  }
  const auto& table = series_bernoulli_table();
  const unsigned max_terms = std::min(rule.max_terms, table.max_index() / 2);
  const mp_bitcnt_t prec = rule.precision_bits;

  mpf_class tt(t, prec);
  mpf_class sum(0, prec);
  mpf_class power(1, prec);  // t^(2k - offset)
  mpz_class fact(1);         // (2k - offset)!
  unsigned exponent = 0;
  double ratio = 1.0;
  unsigned used = 0;
  bool converged = false;
  for (unsigned k = 1; k <= max_terms; ++k) {
    const unsigned target = 2 * k - offset;
    while (exponent < target) {
      ++exponent;
      power *= tt;
      fact *= exponent;
    }
    mpf_class coeff(0, prec);
    coeff = table.get(2 * k).raw() / mpq_class(fact);
    mpf_class term(coeff * power, prec);
    sum += term;
    ++used;
    const double term_d = std::abs(term.get_d());
    const double sum_d = std::abs(sum.get_d());
    ratio = sum_d > 0.0 ? term_d / sum_d : term_d;
    if (k > 1 && ratio < rule.relative_tail) {
      converged = true;
      break;
    }
  }
  return {sum.get_d(), used, ratio, converged};
}

}  // namespace detail

/// Truncated power series for S1. Requires 0 < t < 2 pi.
inline TruncatedSeries series_odd_truncated(double t, const TruncationRule& rule = {}) {
  detail::require_positive_t(t, "series_odd_truncated");
  return detail::truncated_bernoulli_series(t, 1, rule);
}

/// Truncated power series for S2. Requires 0 < t < 2 pi.
inline TruncatedSeries series_even_truncated(double t, const TruncationRule& rule = {}) {
  detail::require_positive_t(t, "series_even_truncated");
  return detail::truncated_bernoulli_series(t, 0, rule);
}

struct BoundSides {
  double lhs;
  double rhs;
};

/// S2(t) against (1/2 - beta) t + [e^s/(e^s-1) + beta - 1] s - 1, s = delta_inv(beta).
/// lhs - rhs equals h_{i,alpha*,beta}(t) >= 0, vanishing only at t = s.
inline BoundSides corollary_third_bound(double t, double beta) {
  detail::require_positive_t(t, "corollary_third_bound");
  detail::require_open_half(beta, "corollary_third_bound");
  const double s = delta_inv(beta);
  const double bracket = (1.0 / std::expm1(s) + beta) * s;
  return {series_even(t), (0.5 - beta) * t + bracket - 1.0};
}

}  // namespace psicm

#endif
