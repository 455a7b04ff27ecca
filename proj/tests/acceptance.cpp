// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "psicm/psicm.hpp"

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& measure) {
  std::printf("%s  %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), measure.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const psicm::GridSpec kGrid{};

// 1. Polygamma values against independent constants.
void polygamma_constants() {
  const double gamma = static_cast<double>(oracle::euler_gamma());
  const double zeta3 = static_cast<double>(oracle::zeta(3.0L));
  const double e1 = std::abs(psicm::polygamma(1, 1.0) - std::numbers::pi * std::numbers::pi / 6);
  const double e0 = std::abs(psicm::polygamma(0, 1.0) + gamma);
  const double e2 = std::abs(psicm::polygamma(2, 1.0) + 2 * zeta3);
  report(1, e1 <= 1e-11 && e0 <= 1e-11 && e2 <= 1e-10, "polygamma at 1 vs gamma, zeta(2), zeta(3) oracles",
         "psi' " + g(e1) + ", psi " + g(e0) + ", psi'' " + g(e2));
}

// 2. Bounds sandwich.
void sandwich() {
  double margin = INFINITY;
  bool ok = true;
  for (unsigned k = 1; k <= 10; ++k) {
    for (double x : oracle::logspace(1e-2, 1e3, 60)) {
      const auto b = psicm::polygamma_bounds(k, x);
      const double v = std::abs(psicm::polygamma(k, x));
      ok = ok && b.lower < v && v < b.upper;
      margin = std::min(margin, std::min(v - b.lower, b.upper - v) / v);
    }
  }
  report(2, ok && margin > 0, "lower < |psi^(k)| < upper, k = 1..10, 60 points", "min relative margin " + g(margin));
}

// 3. Monotonicity boundary matrix.
void monotonicity_matrix() {
  bool ok = true;
  std::string bad;
  auto need = [&](bool cond, const std::string& tag) {
    if (!cond) {
      ok = false;
      bad += " " + tag;
    }
  };
  for (unsigned i = 1; i <= 3; ++i) {
    const std::string is = "i=" + std::to_string(i);
    need(psicm::verify_theorem1_monotonicity({i, i + 1.0, 0.0}, kGrid).pass, is + ":a=i+1");
    need(psicm::verify_theorem1_monotonicity({i, i + 0.0, 0.0}, kGrid, psicm::Direction::Decreasing).pass,
         is + ":a=i");
    const auto up = psicm::verify_theorem1_monotonicity({i, i + 0.5, 0.0}, kGrid);
    const auto down = psicm::verify_theorem1_monotonicity({i, i + 0.5, 0.0}, kGrid, psicm::Direction::Decreasing);
    need(up.first_witness() && down.first_witness(), is + ":a=i+0.5");
    for (double beta : {0.5, 1.0}) {
      need(psicm::verify_theorem1_monotonicity({i, i + 0.0, beta}, kGrid).pass, is + ":b=" + g(beta));
    }
  }
  report(3, ok, "g' sign scans, i = 1..3, boundary alpha and beta", ok ? "all as expected" : "failed:" + bad);
}

struct CmCase {
  psicm::KernelParams p;
  bool negate;
};

std::vector<CmCase> cm_cases() {
  std::vector<CmCase> out;
  for (unsigned i = 1; i <= 3; ++i) {
    out.push_back({{i, i + 1.0, 0.0}, false});
    out.push_back({{i, i + 0.0, 0.0}, true});
    out.push_back({{i, i + 0.0, 0.6}, false});
  }
  return out;
}

// 4. Complete-monotonicity scans.
void cm_scans() {
  bool ok = true;
  std::string bad;
  for (const auto& c : cm_cases()) {
    const psicm::Expr f = psicm::expr_theorem3(c.p);
    if (!psicm::sign_scan(c.negate ? -f : f, 8, kGrid).pass) {
      ok = false;
      bad += " i=" + std::to_string(c.p.i) + ",a=" + g(c.p.alpha) + ",b=" + g(c.p.beta);
    }
  }
  std::string witnesses;
  for (unsigned i = 1; i <= 3; ++i) {
    const auto r = psicm::sign_scan(psicm::expr_theorem3({i, i - 0.5, 0.6}), 8, kGrid);
    const auto w = r.first_witness();
    if (r.pass || !w) {
      ok = false;
      bad += " i=" + std::to_string(i) + ",a=i-0.5 passed";
    } else {
      witnesses += " (k=" + std::to_string(w->k) + ",x=" + g(w->x) + ")";
    }
  }
  report(4, ok, "CM scans k <= 8, default grid, plus alpha = i - 0.5 witnesses",
         ok ? "witnesses" + witnesses : "failed:" + bad);
}

// 5. Dividing by x keeps complete monotonicity.
void divided_by_x() {
  bool ok = true;
  int count = 0;
  for (const auto& c : cm_cases()) {
    const psicm::Expr f = psicm::expr_corollary4(c.p);
    ok = ok && psicm::sign_scan(c.negate ? -f : f, 8, kGrid).pass;
    ++count;
  }
  report(5, ok, "f/x scans for every passing CM configuration", std::to_string(count) + " configurations");
}

// 6. Bernoulli series bounds.
void series_bounds() {
  long double margin = INFINITY;
  long double third = INFINITY;
  const auto ts = oracle::logspace(1e-3, 1e3, 100);
  for (double t : ts) {
    margin = std::min(margin, psicm::series_margins(t).min());
    for (double beta : {0.05, 0.1, 0.25, 0.4, 0.49}) {
      const auto b = psicm::corollary_third_bound(t, beta);
      third = std::min<long double>(third, b.lhs - b.rhs);
    }
  }
  double trunc = 0.0;
  for (double t : oracle::logspace(1e-3, 5.9, 100)) {
    const double s1 = psicm::series_odd(t);
    const double s2 = psicm::series_even(t);
    trunc = std::max(trunc, std::abs(psicm::series_odd_truncated(t).value - s1) / std::abs(s1));
    trunc = std::max(trunc, std::abs(psicm::series_even_truncated(t).value - s2) / std::abs(s2));
  }
  const bool ok = margin > 0 && third > 0 && trunc <= 1e-12;
  report(6, ok, "series bounds on 100 points, third bound, truncation vs closed form",
         "log10 min margin " + g(static_cast<double>(std::log10(margin))) + ", third " +
             g(static_cast<double>(third)) + ", truncation " + g(trunc));
}

// 7. Kernel identities.
void kernel_identities() {
  double round_trip = 0.0;
  double formulas = 0.0;
  bool bracket_ok = true;
  for (int j = 0; j < 50; ++j) {
    const double beta = 0.5 * (j + 0.5) / 50.0;
    round_trip = std::max(round_trip, std::abs(psicm::delta(psicm::delta_inv(beta)) - beta));
    for (unsigned i = 1; i <= 3; ++i) {
      formulas = std::max(formulas, std::abs(psicm::alpha_star(i, beta) - psicm::alpha_star_closed_form(i, beta)));
    }
    const double b = psicm::bracket_value(beta);
    bracket_ok = bracket_ok && b > 0.0 && b < 1.0;
  }
  double limits = 0.0;
  for (unsigned i = 1; i <= 3; ++i) {
    limits = std::max(limits, std::abs(psicm::alpha_star(i, 1e-6) - (i + 1.0)));
    limits = std::max(limits, std::abs(psicm::alpha_star(i, 0.5 - 1e-6) - i));
  }
  const bool ok = round_trip <= 1e-12 && formulas <= 1e-12 && bracket_ok && limits <= 1e-4;
  report(7, ok, "delta round trip, two alpha* formulas, bracket range, limits",
         "round trip " + g(round_trip) + ", formulas " + g(formulas) + ", limits " + g(limits));
}

// 8. h minimum against brute force.
void h_minimum() {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> beta_d(1e-3, 0.5 - 1e-3);
  std::uniform_real_distribution<double> alpha_d(-2.0, 6.0);
  std::uniform_int_distribution<unsigned> i_d(1, 5);
  const auto ts = oracle::logspace(1e-4, 60.0, 2000);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const psicm::KernelParams p{i_d(rng), alpha_d(rng), beta_d(rng)};
    const double brute = oracle::refined_minimum(
        [&](double t) { return static_cast<double>(oracle::h_direct(p.i, p.alpha, p.beta, t)); }, ts);
    worst = std::max(worst, std::abs(psicm::h_min(p).value - brute));
  }
  report(8, worst <= 1e-9, "h_min vs grid search (2000 points, refined), 20 random triples", "max diff " + g(worst));
}

// 9. Integral identities.
void integrals() {
  double central = 0.0;
  for (unsigned i = 1; i <= 3; ++i) {
    for (double alpha : {static_cast<double>(i), i + 1.0}) {
      for (double beta : {0.0, 0.25, 0.5}) {
        for (double x : {0.5, 1.0, 5.0}) {
          const psicm::KernelParams p{i, alpha, beta};
          const double rhs = psicm::central_identity_integral(p, x).value;
          central = std::max(central, psicm::central_identity_residual(p, x) / (1.0 + std::abs(rhs)));
        }
      }
    }
  }
  double laplace = 0.0;
  for (unsigned k = 1; k <= 6; ++k) {
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double direct = (k % 2 == 1 ? 1.0 : -1.0) * psicm::polygamma(k, x);
      laplace = std::max(laplace, std::abs(psicm::laplace_polygamma(k, x).value - direct) / std::abs(direct));
    }
  }
  double power = 0.0;
  for (double r : {0.5, 1.0, 2.0, 2.5, 4.0}) {
    for (double x : {0.5, 1.0, 3.7, 10.0}) {
      power = std::max(power, std::abs(psicm::power_integral(r, x).value * std::pow(x, r) - 1.0));
    }
  }
  const bool ok = central <= 1e-6 && laplace <= 1e-8 && power <= 1e-9;
  report(9, ok, "central identity, Laplace form of psi^(k), power integral",
         "central " + g(central) + ", laplace " + g(laplace) + ", power " + g(power));
}

// 10. Symbolic derivatives against finite differences.
void derivatives() {
  double worst = 0.0;
  for (const psicm::KernelParams p :
       {psicm::KernelParams{1, 2.0, 0.0}, psicm::KernelParams{2, 2.0, 0.5}, psicm::KernelParams{3, 3.5, 0.25}}) {
    const psicm::Expr f = psicm::expr_theorem3(p);
    for (int k = 1; k <= 4; ++k) {
      const psicm::Expr dk = psicm::differentiate(f, k);
      for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        const double fd = oracle::central_derivative([&](double y) { return psicm::evaluate(f, y); }, x, k, 0.02 * x);
        const double sym = psicm::evaluate(dk, x);
        worst = std::max(worst, std::abs(sym - fd) / std::abs(sym));
      }
    }
  }
  report(10, worst <= 1e-6, "k-th derivative, k <= 4, vs order-8 central differences", "max rel " + g(worst));
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria = {polygamma_constants, sandwich,    monotonicity_matrix, cm_scans,
                                            divided_by_x,        series_bounds, kernel_identities, h_minimum,
                                            integrals,           derivatives};
  for (auto* c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL  exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
