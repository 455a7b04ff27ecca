#ifndef PSICM_DERIV_ALGEBRA_HPP
#define PSICM_DERIV_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "psicm/errors.hpp"
#include "psicm/kernel.hpp"
#include "psicm/parallel.hpp"
#include "psicm/polygamma.hpp"

namespace psicm {

/// coeff * x^power * psi^(psi_order)(x + shift), or coeff * x^power when
/// psi_order is empty (shift is then held at 0).
struct Term {
  double coeff = 0.0;
  double power = 0.0;
  std::optional<unsigned> psi_order;
  double shift = 0.0;

  bool like(const Term& o) const { return power == o.power && psi_order == o.psi_order && shift == o.shift; }
};

/// Finite sum of Terms with like terms merged and zero terms removed.
/// Terms are kept sorted, so equal expressions compare equal.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static Expr power(double coeff, double p) { return Expr({Term{coeff, p, std::nullopt, 0.0}}); }
  static Expr psi(double coeff, double p, unsigned order, double shift) {
    return Expr({Term{coeff, p, order, shift}});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Every term finite with nonnegative shift; pure powers carry shift 0.
  bool well_formed() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
      return std::isfinite(t.coeff) && std::isfinite(t.power) && std::isfinite(t.shift) && t.shift >= 0.0 &&
             (t.psi_order || t.shift == 0.0) && t.coeff != 0.0;
    });
  }

  Expr& operator+=(const Expr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
  }
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator*(double c, Expr e) {
    for (auto& t : e.terms_) {
      t.coeff *= c;
    }
    e.normalize();
    return e;
  }
  friend Expr operator-(Expr e) { return -1.0 * std::move(e); }
  friend Expr operator-(Expr a, const Expr& b) { return a + (-b); }

  /// Multiplies by x^dp.
  Expr times_power(double dp) const {
    Expr out = *this;
    for (auto& t : out.terms_) {
      t.power += dp;
    }
    out.normalize();
    return out;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.terms_.size() != b.terms_.size()) {
      return false;
    }
    for (std::size_t j = 0; j < a.terms_.size(); ++j) {
      if (!a.terms_[j].like(b.terms_[j]) || a.terms_[j].coeff != b.terms_[j].coeff) {
        return false;
      }
    }
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) {
      return "0";
    }
    std::ostringstream os;
    os.precision(6);
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      const auto& t = terms_[j];
      if (j > 0) {
        os << (t.coeff < 0 ? " - " : " + ");
      } else if (t.coeff < 0) {
        os << "-";
      }
      os << std::abs(t.coeff);
      if (t.power != 0.0) {
        os << "*x^" << t.power;
      }
      if (t.psi_order) {
        os << "*psi^(" << *t.psi_order << ")(x";
        if (t.shift != 0.0) {
          os << "+" << t.shift;
        }
        os << ")";
      }
    }
    return os.str();
  }

 private:
  static auto key(const Term& t) {
    return std::tuple(t.psi_order.has_value(), t.psi_order.value_or(0), t.shift, t.power);
  }

  void normalize() {
    for (auto& t : terms_) {
      if (!t.psi_order) {
        t.shift = 0.0;
      }
    }
    std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return key(a) < key(b); });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!merged.empty() && merged.back().like(t)) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

/// d/dx by the product rule; stays inside the algebra.
inline Expr differentiate(const Expr& e) {
  std::vector<Term> out;
  out.reserve(2 * e.terms().size());
  for (const auto& t : e.terms()) {
    if (t.power != 0.0) {
      out.push_back({t.coeff * t.power, t.power - 1.0, t.psi_order, t.shift});
    }
    if (t.psi_order) {
      out.push_back({t.coeff, t.power, *t.psi_order + 1, t.shift});
    }
  }
  return Expr(std::move(out));
}

inline Expr differentiate(Expr e, unsigned n) {
  for (unsigned j = 0; j < n; ++j) {
    e = differentiate(e);
  }
  return e;
}

/// Rewrites psi^(m)(x) as psi^(m)(x+1) + (-1)^(m+1) m! x^-(m+1) for every
/// unshifted term. The pole parts become pure powers and merge exactly, which
/// removes the cancellation between poles near x = 0.
inline Expr regularize(const Expr& e) {
  std::vector<Term> out;
  out.reserve(2 * e.terms().size());
  for (const auto& t : e.terms()) {
    if (t.psi_order && t.shift == 0.0) {
      const unsigned m = *t.psi_order;
      out.push_back({t.coeff, t.power, m, 1.0});
      const double pole = factorial(m) * ((m % 2 == 1) ? 1.0 : -1.0);
      out.push_back({t.coeff * pole, t.power - static_cast<double>(m) - 1.0, std::nullopt, 0.0});
    } else {
      out.push_back(t);
    }
  }
  return Expr(std::move(out));
}

struct Evaluation {
  double value;
  /// Sum of |term| values, the roundoff scale of value.
  double scale;
};

inline Evaluation evaluate_scaled(const Expr& e, double x, const EvalConfig& cfg = {}) {
  detail::require_finite(x, "evaluate");
  if (!(x > 0.0)) {
    throw DomainError("evaluate: x must be positive");
  }
  double value = 0.0;
  double scale = 0.0;
  for (const auto& t : e.terms()) {
    double term = t.coeff * std::pow(x, t.power);
    if (t.psi_order) {
      if (!(x + t.shift > 0.0)) {
        throw DomainError("evaluate: x + shift must be positive");
      }
      term *= polygamma(*t.psi_order, x + t.shift, cfg);
    }
    value += term;
    scale += std::abs(term);
  }
  return {value, scale};
}

inline double evaluate(const Expr& e, double x, const EvalConfig& cfg = {}) { return evaluate_scaled(e, x, cfg).value; }

/// (-1)^(i+1)[alpha psi^(i)(x+beta) + x psi^(i+1)(x+beta)]
///   = alpha |psi^(i)(x+beta)| - x |psi^(i+1)(x+beta)|  =  g'(x)/x^(alpha-1)
/// for g(x) = x^alpha |psi^(i)(x+beta)|.
inline Expr expr_theorem3(const KernelParams& p) {
  p.validate();
  const double sign = (p.i % 2 == 1) ? 1.0 : -1.0;
  return Expr({Term{sign * p.alpha, 0.0, p.i, p.beta}, Term{sign, 1.0, p.i + 1, p.beta}});
}

/// expr_theorem3(p) divided by x.
inline Expr expr_corollary4(const KernelParams& p) { return expr_theorem3(p).times_power(-1.0); }

enum class Spacing { Log, Linear };

struct GridSpec {
  double lo = 1e-2;
  double hi = 1e3;
  unsigned count = 400;
  Spacing spacing = Spacing::Log;

  void validate() const {
    detail::require_finite(lo, "GridSpec lo");
    detail::require_finite(hi, "GridSpec hi");
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
      throw DomainError("GridSpec: need 0 < lo < hi and count >= 2");
    }
  }

  std::vector<double> points() const {
    validate();
    std::vector<double> xs(count);
    const double n = static_cast<double>(count - 1);
    for (unsigned j = 0; j < count; ++j) {
      const double u = static_cast<double>(j) / n;
      xs[j] = spacing == Spacing::Log ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    }
    xs.front() = lo;
    xs.back() = hi;
    return xs;
  }
};

inline std::string_view to_string(Spacing s) { return s == Spacing::Log ? "log" : "linear"; }

struct OrderMinimum {
  unsigned k;
  double min_value;
  double argmin;
};

struct Witness {
  unsigned k;
  double x;
  double value;
};

/// Grid evidence for (-1)^k f^(k) >= 0, k = 0..k_max.
struct SignScanReport {
  unsigned k_max = 0;
  GridSpec grid;
  double tolerance = 0.0;
  std::vector<OrderMinimum> per_k_min;
  /// Violations, at most kMaxWitnessesPerOrder kept per order.
  std::vector<Witness> witnesses;
  std::size_t violation_count = 0;
  bool pass = true;

  static constexpr std::size_t kMaxWitnessesPerOrder = 8;

  std::optional<Witness> first_witness() const {
    if (witnesses.empty()) {
      return std::nullopt;
    }
    return witnesses.front();
  }
};

inline constexpr unsigned kMaxScanOrder = 12;
inline constexpr double kDefaultScanTolerance = 1e-9;

/// For k = 0..k_max evaluates (-1)^k f^(k) on the grid from the symbolic
/// derivative. A point violates when the value is below
/// -tolerance * (1 + sum of |terms|). Orders run in parallel; the report is
/// assembled in order.
inline SignScanReport sign_scan(const Expr& e, unsigned k_max, const GridSpec& grid,
                                double tolerance = kDefaultScanTolerance, const EvalConfig& cfg = {}) {
  if (k_max > kMaxScanOrder) {
    throw CapacityError("sign_scan: k_max above " + std::to_string(kMaxScanOrder));
  }
  if (!(tolerance > 0.0)) {
    throw DomainError("sign_scan: tolerance must be positive");
  }
  const std::vector<double> xs = grid.points();

  std::vector<Expr> derivs;
  derivs.reserve(k_max + 1);
  Expr d = e;
  for (unsigned k = 0; k <= k_max; ++k) {
    derivs.push_back(regularize(d));
    d = differentiate(d);
  }

  struct OrderResult {
    OrderMinimum minimum;
    std::vector<Witness> witnesses;
    std::size_t violations = 0;
  };
  std::vector<OrderResult> results(k_max + 1);

  detail::parallel_for(k_max + 1, [&](std::size_t k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    OrderResult r{{static_cast<unsigned>(k), std::numeric_limits<double>::infinity(), xs.front()}, {}, 0};
    for (const double x : xs) {
      Evaluation ev{};
      try {
        ev = evaluate_scaled(derivs[k], x, cfg);
      } catch (const std::exception& ex) {
        std::ostringstream os;
        os.precision(17);
        os << "sign_scan: evaluation failed at k = " << k << ", x = " << x << ": " << ex.what();
        throw DomainError(os.str());
      }
      const double v = sign * ev.value;
      if (v < r.minimum.min_value) {
        r.minimum.min_value = v;
        r.minimum.argmin = x;
      }
      if (!(v >= -tolerance * (1.0 + ev.scale))) {
        ++r.violations;
        if (r.witnesses.size() < SignScanReport::kMaxWitnessesPerOrder) {
          r.witnesses.push_back({static_cast<unsigned>(k), x, v});
        }
      }
    }
    results[k] = std::move(r);
  });

  SignScanReport report;
  report.k_max = k_max;
  report.grid = grid;
  report.tolerance = tolerance;
  for (auto& r : results) {
    report.per_k_min.push_back(r.minimum);
    report.violation_count += r.violations;
    report.witnesses.insert(report.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
  }
  report.pass = report.violation_count == 0;
  return report;
}

enum class Direction { Increasing, Decreasing };

/// Sign of g'(x) = x^(alpha-1) * expr_theorem3(p) on the grid.
/// Increasing checks the expression >= 0, Decreasing checks <= 0.
inline SignScanReport verify_theorem1_monotonicity(const KernelParams& p, const GridSpec& grid,
                                                   Direction direction = Direction::Increasing,
                                                   double tolerance = kDefaultScanTolerance) {
  const Expr f = expr_theorem3(p);
  return sign_scan(direction == Direction::Increasing ? f : -f, 0, grid, tolerance);
}

}  // namespace psicm

#endif
