#ifndef PSICM_QUADRATURE_HPP
#define PSICM_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "psicm/deriv_algebra.hpp"
#include "psicm/errors.hpp"
#include "psicm/kernel.hpp"
#include "psicm/polygamma.hpp"

namespace psicm {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  unsigned evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  /// Maximum number of integrand evaluations on the finite part.
  unsigned max_evaluations = 15 * 2000;
  /// Tail cut is placed where the analytic tail bound drops below this
  /// fraction of the integral.
  double tail_fraction = 1e-14;
  /// Throw AccuracyError instead of returning an unconverged result.
  bool throw_on_failure = true;
};

namespace detail {

// 15-point Kronrod nodes on [0, 1] (positive half) with embedded 7-point Gauss.
struct Gk15 {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel gk15_panel(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * Gk15::wk[7];
  double gauss = fc * Gk15::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * Gk15::xk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += Gk15::wk[j] * pair;
    if (j % 2 == 1) {
      gauss += Gk15::wg[j / 2] * pair;
    }
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) on [a, b], bisecting the panel with the
/// largest error estimate. The reported (value, error) is the pair with the
/// smallest total error estimate seen, so a larger evaluation budget never
/// reports a larger error estimate. Panel sums run in storage order.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
  std::vector<detail::Panel> panels{detail::gk15_panel(f, a, b)};
  unsigned evaluations = 15;

  QuadratureResult best{panels[0].value, panels[0].error, evaluations};
  while (evaluations + 30 <= opt.max_evaluations) {
    if (best.abs_error_estimate <= std::max(opt.abs_tol, opt.rel_tol * std::abs(best.value))) {
      break;
    }
    const auto worst = std::max_element(panels.begin(), panels.end(),
                                        [](const auto& x, const auto& y) { return x.error < y.error; });
    const double mid = 0.5 * (worst->a + worst->b);
    const auto left = detail::gk15_panel(f, worst->a, mid);
    const auto right = detail::gk15_panel(f, mid, worst->b);
    evaluations += 30;
    *worst = left;
    panels.push_back(right);

    double value = 0.0;
    double error = 0.0;
    for (const auto& panel : panels) {
      value += panel.value;
      error += panel.error;
    }
    if (error < best.abs_error_estimate) {
      best = {value, error, evaluations};
    }
  }
  best.evaluations = evaluations;
  return best;
}

namespace detail {

// Upper bound of int_T^inf t^p e^{-y t} dt, valid for y T > p.
inline double power_exp_tail(double p, double y, double cut) {
  if (!(y * cut > p)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(cut, p) * std::exp(-y * cut) / (y - p / cut);
}

// Integrates f over (0, inf) where |f(t)| <= sum_j c_j t^(p_j) e^{-y t} for
// t >= 1. The cut T grows until the tail bound is negligible.
template <class F>
QuadratureResult integrate_laplace(const F& f, double y, const std::vector<std::pair<double, double>>& envelope,
                                   const QuadratureOptions& opt, const char* what) {
  auto tail_bound = [&](double cut) {
    double total = 0.0;
    for (const auto& [c, p] : envelope) {
      total += std::abs(c) * power_exp_tail(p, y, cut);
    }
    return total;
  };

  double max_power = 0.0;
  for (const auto& term : envelope) {
    max_power = std::max(max_power, term.second);
  }
  double cut = std::max(1.0, 2.0 * (max_power + 1.0) / y);
  QuadratureResult body = integrate_adaptive(f, 0.0, cut, opt);
  for (int grow = 0; grow < 60; ++grow) {
    const double tail = tail_bound(cut);
    if (tail <= opt.tail_fraction * std::abs(body.value) || tail == 0.0) {
      break;
    }
    cut *= 1.5;
    body = integrate_adaptive(f, 0.0, cut, opt);
  }
  const double tail = tail_bound(cut);
  QuadratureResult out{body.value, body.abs_error_estimate + tail, body.evaluations};
  const double target = std::max(opt.abs_tol, 10.0 * opt.rel_tol * std::abs(out.value));
  if (opt.throw_on_failure && !(out.abs_error_estimate <= std::max(target, 1e-10 * std::abs(out.value)))) {
    throw AccuracyError(std::string(what) + ": adaptive refinement did not converge", out.value,
                        out.abs_error_estimate);
  }
  return out;
}

// 1/(1 - e^-t) * t^k without cancellation near 0.
inline double polygamma_integrand(unsigned k, double x, double t) {
  if (t == 0.0) {
    return k == 1 ? 1.0 : 0.0;
  }
  const double t_over = t / -std::expm1(-t);
  return t_over * std::pow(t, static_cast<double>(k) - 1.0) * std::exp(-x * t);
}

}  // namespace detail

/// int_0^inf t^k e^{-xt}/(1 - e^-t) dt = (-1)^(k+1) psi^(k)(x), by quadrature.
inline QuadratureResult laplace_polygamma(unsigned k, double x, const QuadratureOptions& opt = {}) {
  if (k < 1) {
    throw DomainError("laplace_polygamma: k must be >= 1");
  }
  detail::require_finite(x, "laplace_polygamma");
  if (!(x > 0.0)) {
    throw DomainError("laplace_polygamma: x must be positive");
  }
  // 1/(1 - e^-t) <= 1 + 1/t for t > 0.
  const double kd = static_cast<double>(k);
  return detail::integrate_laplace([k, x](double t) { return detail::polygamma_integrand(k, x, t); }, x,
                                   {{1.0, kd}, {1.0, kd - 1.0}}, opt, "laplace_polygamma");
}

/// Gamma(r)^-1 int_0^inf t^(r-1) e^{-xt} dt = x^-r, by quadrature.
/// For r < 1 the substitution t = u^(1/r) removes the endpoint singularity.
inline QuadratureResult power_integral(double r, double x, const QuadratureOptions& opt = {}) {
  detail::require_finite(r, "power_integral");
  detail::require_finite(x, "power_integral");
  if (!(r > 0.0) || !(x > 0.0)) {
    throw DomainError("power_integral: r and x must be positive");
  }
  const double gamma_r = std::tgamma(r);
  if (r >= 1.0) {
    auto res = detail::integrate_laplace(
        [r, x](double t) { return t == 0.0 ? (r == 1.0 ? 1.0 : 0.0) : std::pow(t, r - 1.0) * std::exp(-x * t); }, x,
        {{1.0, r - 1.0}}, opt, "power_integral");
    res.value /= gamma_r;
    res.abs_error_estimate /= gamma_r;
    return res;
  }
  // dt = (1/r) u^(1/r - 1) du and t^(r-1) = u^(1 - 1/r): integrand (1/r) e^{-x u^(1/r)}.
  const double inv_r = 1.0 / r;
  auto g = [inv_r, x](double u) { return inv_r * std::exp(-x * std::pow(u, inv_r)); };
  // Tail in u: e^{-x u^(1/r)} <= e^{-x u} for u >= 1.
  auto res = detail::integrate_laplace(g, x, {{inv_r, 0.0}}, opt, "power_integral");
  res.value /= gamma_r;
  res.abs_error_estimate /= gamma_r;
  return res;
}

/// int_0^inf h_{i,alpha,beta}(t) t^i e^{-(x+beta)t} dt by quadrature.
inline QuadratureResult central_identity_integral(const KernelParams& p, double x, const QuadratureOptions& opt = {}) {
  p.validate();
  detail::require_finite(x, "central_identity_integral");
  if (!(x > 0.0)) {
    throw DomainError("central_identity_integral: x must be positive");
  }
  const double y = x + p.beta;
  const double id = static_cast<double>(p.i);
  auto f = [&p, y, id](double t) {
    if (t == 0.0) {
      return 0.0;
    }
    return h(p, t) * std::pow(t, id) * std::exp(-y * t);
  };
  // |h(t)| <= 1 + t + |beta - 1| t + |alpha - i - 1|.
  const double constant = 1.0 + std::abs(p.alpha - id - 1.0);
  const double linear = 1.0 + std::abs(p.beta - 1.0);
  return detail::integrate_laplace(f, y, {{constant, id}, {linear, id + 1.0}}, opt, "central_identity_integral");
}

/// |[F(x) - F(x+1)] - int h t^i e^{-(x+beta)t} dt| where F is the signed
/// expression (-1)^(i+1)[alpha psi^(i)(x+beta) + x psi^(i+1)(x+beta)].
inline double central_identity_residual(const KernelParams& p, double x, const QuadratureOptions& opt = {}) {
  const Expr f = expr_theorem3(p);
  const double lhs = evaluate(f, x) - evaluate(f, x + 1.0);
  const double rhs = central_identity_integral(p, x, opt).value;
  return std::abs(lhs - rhs);
}

}  // namespace psicm

#endif
