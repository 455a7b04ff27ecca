#ifndef PSICM_KERNEL_HPP
#define PSICM_KERNEL_HPP

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "psicm/bernoulli.hpp"
#include "psicm/errors.hpp"

namespace psicm {

/// The triple (i, alpha, beta): polygamma order, power of x, argument shift.
struct KernelParams {
  unsigned i = 1;
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    if (i < 1) {
      throw DomainError("KernelParams: i must be >= 1");
    }
    detail::require_finite(alpha, "KernelParams alpha");
    detail::require_finite(beta, "KernelParams beta");
    if (!(beta >= 0.0)) {
      throw DomainError("KernelParams: beta must be >= 0");
    }
  }
};

namespace detail {

inline constexpr double kDeltaSeriesCutoff = 1.0;

// c_k = B_2k / (2k-1)!, k = 1..14. delta(t) = 1/2 - sum c_k t^(2k-1).
inline const std::array<double, 15>& delta_series_coefficients() {
  static const std::array<double, 15> c = [] {
    std::array<double, 15> out{};
    for (unsigned k = 1; k < out.size(); ++k) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), 2 * k - 1);
      out[k] = (bernoulli_number(2 * k) / ExactRational(f, mpz_class(1))).to_double();
    }
    return out;
  }();
  return c;
}

inline void require_open_half(double beta, const char* what) {
  require_finite(beta, what);
  if (!(beta > 0.0 && beta < 0.5)) {
    throw DomainError(std::string(what) + ": beta must lie in (0, 1/2)");
  }
}

inline void require_positive_t(double t, const char* what) {
  require_finite(t, what);
  if (!(t > 0.0)) {
    throw DomainError(std::string(what) + ": t must be positive");
  }
}

// sum_k c_k t^(2k-1), i.e. 1/2 - delta(t), for 0 < t < kDeltaSeriesCutoff.
inline double delta_series_sum(double t) {
  const auto& c = delta_series_coefficients();
  const double t2 = t * t;
  double acc = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    acc = acc * t2 + c[k];
  }
  return acc * t;
}

}  // namespace detail

/// delta(t) = (e^t (t-1) + 1) / (e^t - 1)^2, strictly decreasing from (0, inf)
/// onto (0, 1/2).
inline double delta(double t) {
  detail::require_positive_t(t, "delta");
  if (t < detail::kDeltaSeriesCutoff) {
    return 0.5 - detail::delta_series_sum(t);
  }
  // e^-t form keeps large t finite.
  const double q = std::exp(-t);
  const double one_minus_q = -std::expm1(-t);
  return q * ((t - 1.0) + q) / (one_minus_q * one_minus_q);
}

/// d(delta)/dt, negative on (0, inf).
inline double delta_derivative(double t) {
  detail::require_positive_t(t, "delta_derivative");
  if (t < detail::kDeltaSeriesCutoff) {
    // -sum c_k (2k-1) t^(2k-2)
    const auto& c = detail::delta_series_coefficients();
    const double t2 = t * t;
    double acc = 0.0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
      acc = acc * t2 + c[k] * static_cast<double>(2 * k - 1);
    }
    return -acc;
  }
  const double q = std::exp(-t);
  const double one_minus_q = -std::expm1(-t);
  // [t e^t (e^t-1) - 2 e^t (e^t(t-1)+1)] / (e^t-1)^3 in e^-t form.
  const double num = t * one_minus_q - 2.0 * ((t - 1.0) + q);
  return q * num / (one_minus_q * one_minus_q * one_minus_q);
}

/// Inverse of delta on (0, 1/2). Geometric bracket growth from the seed
/// 6(1/2 - beta), then safeguarded Newton.
inline double delta_inv(double beta) {
  detail::require_open_half(beta, "delta_inv");
  const double seed = 6.0 * (0.5 - beta);
  double lo = seed;
  double hi = seed;
  while (delta(lo) <= beta) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw AccuracyError("delta_inv: failed to bracket from below", lo, lo);
    }
  }
  while (delta(hi) >= beta) {
    hi *= 2.0;
    if (hi > 1e4) {
      throw AccuracyError("delta_inv: failed to bracket from above", hi, hi);
    }
  }
  // delta(lo) > beta > delta(hi)
  double s = std::min(std::max(seed, lo), hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = delta(s) - beta;
    if (f == 0.0) {
      return s;
    }
    if (f > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    double next = s - f / delta_derivative(s);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * s) {
      return next;
    }
    s = next;
  }
  return s;
}

/// h_{i,alpha,beta}(t) = t/(1 - e^-t) + (beta - 1) t + alpha - i - 1,
/// evaluated as t/(e^t - 1) + beta t + alpha - i - 1.
inline double h(const KernelParams& p, double t) {
  detail::require_positive_t(t, "h");
  return t / std::expm1(t) + p.beta * t + (p.alpha - static_cast<double>(p.i) - 1.0);
}

/// h' = beta - delta(t).
inline double h_prime(const KernelParams& p, double t) {
  detail::require_positive_t(t, "h_prime");
  return p.beta - delta(t);
}

struct HMinimum {
  double t0;
  double value;
};

/// Interior minimum of h, located at delta(t0) = beta. Requires beta in (0, 1/2).
inline HMinimum h_min(const KernelParams& p) {
  detail::require_open_half(p.beta, "h_min");
  const double s = delta_inv(p.beta);
  return {s, h(p, s)};
}

/// [e^s/(e^s - 1) + beta - 1] s with s = delta_inv(beta); lies in (0, 1).
inline double bracket_value(double beta) {
  detail::require_open_half(beta, "bracket_value");
  const double s = delta_inv(beta);
  return (1.0 / std::expm1(s) + beta) * s;
}

/// s^2 e^s / (e^s - 1)^2, the closed form the bracket reduces to on delta(s) = beta.
inline double bracket_closed_form(double s) {
  detail::require_positive_t(s, "bracket_closed_form");
  const double q = std::exp(-s);
  const double one_minus_q = -std::expm1(-s);
  return s * s * q / (one_minus_q * one_minus_q);
}

/// Threshold i + 1 - bracket_value(beta): sufficient for monotonicity and
/// complete monotonicity when 0 < beta < 1/2.
inline double alpha_star(unsigned i, double beta) {
  if (i < 1) {
    throw DomainError("alpha_star: i must be >= 1");
  }
  return static_cast<double>(i) + 1.0 - bracket_value(beta);
}

/// Same threshold through s^2 e^s/(e^s-1)^2.
inline double alpha_star_closed_form(unsigned i, double beta) {
  if (i < 1) {
    throw DomainError("alpha_star: i must be >= 1");
  }
  detail::require_open_half(beta, "alpha_star_closed_form");
  return static_cast<double>(i) + 1.0 - bracket_closed_form(delta_inv(beta));
}

struct ThresholdPoint {
  double beta;
  double s;
  double alpha_star;
};

inline ThresholdPoint threshold_point(unsigned i, double beta) {
  const double s = delta_inv(beta);
  return {beta, s, static_cast<double>(i) + 1.0 - (1.0 / std::expm1(s) + beta) * s};
}

enum class Verdict {
  IncreasingIff,
  DecreasingIff,
  CompletelyMonotonicIff,
  NegativeCompletelyMonotonicIff,
  SufficientOnly,
  OutsideKnownConditions,
};

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::IncreasingIff:
      return "IncreasingIff";
    case Verdict::DecreasingIff:
      return "DecreasingIff";
    case Verdict::CompletelyMonotonicIff:
      return "CompletelyMonotonicIff";
    case Verdict::NegativeCompletelyMonotonicIff:
      return "NegativeCompletelyMonotonicIff";
    case Verdict::SufficientOnly:
      return "SufficientOnly";
    case Verdict::OutsideKnownConditions:
      return "OutsideKnownConditions";
  }
  return "?";
}

/// Verdicts for g(x) = x^alpha |psi^(i)(x+beta)| (monotonicity) and for
/// f(x) = alpha |psi^(i)(x+beta)| - x |psi^(i+1)(x+beta)| (complete
/// monotonicity), with the rule that produced them.
struct Classification {
  Verdict monotonicity;
  Verdict complete_monotonicity;
  std::string rule;
  /// alpha*(i, beta) when 0 < beta < 1/2.
  std::optional<double> threshold;

  /// f expected to pass a complete-monotonicity scan.
  bool expects_cm() const {
    return complete_monotonicity == Verdict::CompletelyMonotonicIff ||
           complete_monotonicity == Verdict::SufficientOnly;
  }
  /// -f expected to pass a complete-monotonicity scan.
  bool expects_negative_cm() const {
    return complete_monotonicity == Verdict::NegativeCompletelyMonotonicIff;
  }
  bool definite() const { return complete_monotonicity != Verdict::OutsideKnownConditions; }
};

inline Classification classify(const KernelParams& p) {
  p.validate();
  const double i = static_cast<double>(p.i);
  if (p.beta == 0.0) {
    if (p.alpha >= i + 1.0) {
      return {Verdict::IncreasingIff, Verdict::CompletelyMonotonicIff,
              "beta = 0: g increasing and f completely monotonic iff alpha >= i+1", std::nullopt};
    }
    if (p.alpha <= i) {
      return {Verdict::DecreasingIff, Verdict::NegativeCompletelyMonotonicIff,
              "beta = 0: g decreasing and -f completely monotonic iff alpha <= i", std::nullopt};
    }
    return {Verdict::OutsideKnownConditions, Verdict::OutsideKnownConditions,
            "beta = 0, i < alpha < i+1: g is neither increasing nor decreasing; f changes sign "
            "(sign scans exhibit both signs)",
            std::nullopt};
  }
  if (p.beta >= 0.5) {
    if (p.alpha >= i) {
      return {Verdict::IncreasingIff, Verdict::CompletelyMonotonicIff,
              "beta >= 1/2: g increasing and f completely monotonic iff alpha >= i", std::nullopt};
    }
    return {Verdict::OutsideKnownConditions, Verdict::OutsideKnownConditions,
            "beta >= 1/2, alpha < i: necessity alpha >= i fails", std::nullopt};
  }
  const double threshold = alpha_star(p.i, p.beta);
  if (p.alpha >= threshold) {
    return {Verdict::SufficientOnly, Verdict::SufficientOnly,
            "0 < beta < 1/2, alpha >= alpha*(i, beta): sufficient for g increasing and f completely "
            "monotonic",
            threshold};
  }
  if (p.alpha < i) {
    return {Verdict::OutsideKnownConditions, Verdict::OutsideKnownConditions,
            "0 < beta < 1/2, alpha < i: necessity alpha >= i fails", threshold};
  }
  return {Verdict::OutsideKnownConditions, Verdict::OutsideKnownConditions,
          "0 < beta < 1/2, i <= alpha < alpha*(i, beta): no known result", threshold};
}

}  // namespace psicm

#endif
