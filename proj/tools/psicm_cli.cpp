// psicm command-line front end: classify, threshold, verify.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psicm/psicm.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv, Text };

std::string fmt_double(double v, int digits) {
  if (!std::isfinite(v)) {
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Sorted keys (json objects are std::map), two-space indent, 17 significant digits.
void write_json(std::ostream& os, const json& j, int indent) {
  const std::string pad(2 * (indent + 1), ' ');
  const std::string close(2 * indent, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(key).dump() << ": ";
        write_json(os, value, indent + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t n = 0; n < j.size(); ++n) {
        if (n > 0) os << ",\n";
        os << pad;
        write_json(os, j[n], indent + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? fmt_double(v, 17) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

json grid_json(const psicm::GridSpec& g) {
  return {{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}, {"spacing", std::string(psicm::to_string(g.spacing))}};
}

json scan_json(const std::string& label, const psicm::SignScanReport& r) {
  json mins = json::array();
  for (const auto& m : r.per_k_min) {
    mins.push_back({{"k", m.k}, {"min", m.min_value}, {"argmin", m.argmin}});
  }
  json wit = json::array();
  for (const auto& w : r.witnesses) {
    wit.push_back({{"k", w.k}, {"x", w.x}, {"value", w.value}});
  }
  return {{"function", label},     {"k_max", r.k_max},       {"grid", grid_json(r.grid)},
          {"tolerance", r.tolerance}, {"per_k_min", mins},   {"witnesses", wit},
          {"violation_count", r.violation_count}, {"verdict", r.pass ? "pass" : "fail"}};
}

// One verification check. status is pass, fail or indeterminate.
struct Check {
  std::string suite;
  std::string name;
  std::string claim;
  std::string status;
  json detail = json::object();
};

json check_json(const Check& c) {
  return {{"suite", c.suite}, {"name", c.name}, {"claim", c.claim}, {"status", c.status}, {"detail", c.detail}};
}

std::string params_name(const psicm::KernelParams& p) {
  return "i=" + std::to_string(p.i) + " alpha=" + fmt_double(p.alpha, 6) + " beta=" + fmt_double(p.beta, 6);
}

json params_json(const psicm::KernelParams& p) { return {{"i", p.i}, {"alpha", p.alpha}, {"beta", p.beta}}; }

struct VerifyOptions {
  std::string suite = "all";
  psicm::GridSpec grid;
  unsigned k_max = 8;
  double tolerance = psicm::kDefaultScanTolerance;
  std::optional<double> alpha_offset;
  std::optional<double> beta;
  std::vector<unsigned> orders = {1, 2, 3};
};

// Parameter triples for the scan suites: the defaults, or one per i when overridden.
std::vector<psicm::KernelParams> scan_configs(const VerifyOptions& o, const std::vector<std::pair<double, double>>& defaults) {
  std::vector<psicm::KernelParams> out;
  for (unsigned i : o.orders) {
    if (o.alpha_offset || o.beta) {
      out.push_back({i, i + o.alpha_offset.value_or(1.0), o.beta.value_or(0.0)});
    } else {
      for (const auto& [da, beta] : defaults) {
        out.push_back({i, i + da, beta});
      }
    }
  }
  return out;
}

// Grid evidence against a classification: iff and sufficient verdicts must pass,
// a failed necessity condition should produce a witness, unknown regions are
// reported only.
Check classify_scan(const std::string& suite, const psicm::KernelParams& p, unsigned k_max, const VerifyOptions& o) {
  const auto c = psicm::classify(p);
  const psicm::Expr f = psicm::expr_theorem3(p);
  const std::string fname = "f";
  Check ch{suite, params_name(p), c.rule, "indeterminate"};
  ch.detail["params"] = params_json(p);
  ch.detail["verdict"] = std::string(psicm::to_string(k_max == 0 ? c.monotonicity : c.complete_monotonicity));
  if (c.threshold) ch.detail["alpha_star"] = *c.threshold;
  json scans = json::array();
  auto run = [&](const psicm::Expr& e, const std::string& label) {
    auto r = psicm::sign_scan(e, k_max, o.grid, o.tolerance);
    scans.push_back(scan_json(label, r));
    return r;
  };
  if (c.expects_cm()) {
    ch.detail["expected"] = "pass for " + fname;
    ch.status = run(f, fname).pass ? "pass" : "fail";
  } else if (c.expects_negative_cm()) {
    ch.detail["expected"] = "pass for -" + fname;
    ch.status = run(-f, "-" + fname).pass ? "pass" : "fail";
  } else if (p.beta == 0.0) {
    // i < alpha < i+1: f takes both signs.
    ch.detail["expected"] = "sign change of " + fname;
    const auto up = psicm::sign_scan(f, 0, o.grid, o.tolerance);
    const auto down = psicm::sign_scan(-f, 0, o.grid, o.tolerance);
    scans.push_back(scan_json(fname, up));
    scans.push_back(scan_json("-" + fname, down));
    ch.status = (!up.pass && !down.pass) ? "pass" : "indeterminate";
  } else if (p.alpha < p.i) {
    ch.detail["expected"] = "fail for " + fname + " with a witness";
    const auto r = run(f, fname);
    ch.status = (!r.pass && r.first_witness()) ? "pass" : "indeterminate";
  } else {
    ch.detail["expected"] = "none";
    run(f, fname);
  }
  ch.detail["scans"] = scans;
  return ch;
}

std::vector<Check> suite_theorem1(const VerifyOptions& o) {
  std::vector<Check> out;
  for (const auto& p : scan_configs(o, {{1.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.0, 1.0}})) {
    out.push_back(classify_scan("theorem1", p, 0, o));
  }
  return out;
}

std::vector<Check> suite_theorem3(const VerifyOptions& o) {
  std::vector<Check> out;
  for (const auto& p : scan_configs(o, {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.6}, {-0.5, 0.6}})) {
    out.push_back(classify_scan("theorem3", p, o.k_max, o));
  }
  return out;
}

std::vector<Check> suite_corollary4(const VerifyOptions& o) {
  std::vector<Check> out;
  for (const auto& p : scan_configs(o, {{1.0, 0.0}, {0.0, 0.6}, {0.0, 0.5}, {1.0, 0.25}})) {
    const auto base = psicm::sign_scan(psicm::expr_theorem3(p), o.k_max, o.grid, o.tolerance);
    const auto div = psicm::sign_scan(psicm::expr_corollary4(p), o.k_max, o.grid, o.tolerance);
    Check ch{"corollary4", params_name(p), "f completely monotonic implies f/x completely monotonic", "indeterminate"};
    ch.detail["params"] = params_json(p);
    ch.detail["scans"] = json::array({scan_json("f", base), scan_json("f/x", div)});
    if (base.pass) {
      ch.status = div.pass ? "pass" : "fail";
    }
    out.push_back(ch);
  }
  return out;
}

std::vector<Check> suite_corollary2() {
  std::vector<Check> out;
  const psicm::GridSpec tg{1e-3, 1e3, 100, psicm::Spacing::Log};
  const auto ts = tg.points();

  auto record = [&](std::string name, std::string claim, long double margin, double worst_t) {
    Check ch{"corollary2", std::move(name), std::move(claim), margin > 0.0L ? "pass" : "fail"};
    // Margins reach 1e-430 near t = 1e3, below the double range, so report log10.
    const double log_margin = margin > 0.0L ? static_cast<double>(std::log10(margin)) : NAN;
    ch.detail = {{"t_grid", grid_json(tg)}, {"min_log10_margin", log_margin}, {"argmin_t", worst_t}};
    out.push_back(ch);
  };

  long double m1 = INFINITY, m2 = INFINITY;
  double a1 = 0, a2 = 0;
  for (double t : ts) {
    const auto m = psicm::series_margins(t);
    const long double g1 = std::min(m.odd_lower, m.odd_upper);
    const long double g2 = std::min(m.even_lower, m.even_upper);
    if (g1 < m1) m1 = g1, a1 = t;
    if (g2 < m2) m2 = g2, a2 = t;
  }
  record("odd_series_bounds", "0 < S1(t) < 1/2", m1, a1);
  record("even_series_bounds", "max(0, t/2 - 1) < S2(t) < t/2", m2, a2);

  for (double beta : {0.05, 0.1, 0.25, 0.4, 0.49}) {
    long double m = INFINITY;
    double a = 0;
    for (double t : ts) {
      const auto b = psicm::corollary_third_bound(t, beta);
      if (b.lhs - b.rhs < m) m = b.lhs - b.rhs, a = t;
    }
    record("third_bound beta=" + fmt_double(beta, 6), "S2(t) > (1/2 - beta) t + (1/(e^s - 1) + beta) s - 1, s = delta^-1(beta)",
           m, a);
  }

  double worst = 0.0, worst_t = 0.0;
  bool converged = true;
  for (double t : psicm::GridSpec{1e-3, 5.9, 100, psicm::Spacing::Log}.points()) {
    const auto odd = psicm::series_odd_truncated(t);
    const auto even = psicm::series_even_truncated(t);
    converged = converged && odd.converged && even.converged;
    const double e1 = std::abs(odd.value - psicm::series_odd(t)) / std::abs(psicm::series_odd(t));
    const double e2 = std::abs(even.value - psicm::series_even(t)) / std::abs(psicm::series_even(t));
    if (std::max(e1, e2) > worst) worst = std::max(e1, e2), worst_t = t;
  }
  Check ch{"corollary2", "truncated_series", "truncated Bernoulli sums agree with closed forms for t < 5.9",
           (converged && worst <= 1e-12) ? "pass" : "fail"};
  ch.detail = {{"max_rel_error", worst}, {"argmax_t", worst_t}, {"tolerance", 1e-12}, {"converged", converged}};
  out.push_back(ch);
  return out;
}

std::vector<Check> suite_identities(const VerifyOptions& o) {
  std::vector<Check> out;
  {
    json rows = json::array();
    double worst = 0.0;
    bool ok = true;
    for (unsigned i : o.orders) {
      for (double alpha : {static_cast<double>(i), i + 1.0}) {
        for (double beta : {0.0, 0.25, 0.5}) {
          for (double x : {0.5, 1.0, 5.0}) {
            const psicm::KernelParams p{i, alpha, beta};
            const double rhs = psicm::central_identity_integral(p, x).value;
            const double rel = psicm::central_identity_residual(p, x) / (1.0 + std::abs(rhs));
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-6;
            rows.push_back({{"params", params_json(p)}, {"x", x}, {"rel_residual", rel}});
          }
        }
      }
    }
    Check ch{"identities", "central_identity", "F(x) - F(x+1) = int h(t) t^i e^{-(x+beta)t} dt", ok ? "pass" : "fail"};
    ch.detail = {{"max_rel_residual", worst}, {"tolerance", 1e-6}, {"samples", rows}};
    out.push_back(ch);
  }
  {
    double worst = 0.0;
    for (unsigned k = 1; k <= 6; ++k) {
      for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double direct = (k % 2 == 1 ? 1.0 : -1.0) * psicm::polygamma(k, x);
        worst = std::max(worst, std::abs(psicm::laplace_polygamma(k, x).value - direct) / std::abs(direct));
      }
    }
    Check ch{"identities", "laplace_polygamma", "psi^(k)(x) = (-1)^(k+1) int t^k e^{-xt}/(1 - e^-t) dt",
             worst <= 1e-8 ? "pass" : "fail"};
    ch.detail = {{"max_rel_error", worst}, {"tolerance", 1e-8}};
    out.push_back(ch);
  }
  {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0, 2.5, 4.0}) {
      for (double x : {0.5, 1.0, 3.7, 10.0}) {
        worst = std::max(worst, std::abs(psicm::power_integral(r, x).value * std::pow(x, r) - 1.0));
      }
    }
    Check ch{"identities", "power_integral", "x^-r = Gamma(r)^-1 int t^(r-1) e^{-xt} dt", worst <= 1e-9 ? "pass" : "fail"};
    ch.detail = {{"max_rel_error", worst}, {"tolerance", 1e-9}};
    out.push_back(ch);
  }
  return out;
}

// Quadrature failures become failed checks rather than tool errors.
std::vector<Check> guarded(const std::string& suite, const std::function<std::vector<Check>()>& body) {
  try {
    return body();
  } catch (const psicm::AccuracyError& e) {
    Check ch{suite, "accuracy", "numerical evaluation converges", "fail"};
    ch.detail = {{"error", e.what()}, {"partial_value", e.partial_value()}, {"error_estimate", e.error_estimate()}};
    return {ch};
  }
}

struct Document {
  std::string command;
  json parameters = json::object();
  json results = json::object();
  std::string status = "pass";

  json to_json() const {
    return {{"command", command}, {"parameters", parameters}, {"results", results}, {"status", status},
            {"tool_version", PSICM_VERSION}};
  }
};

std::string aggregate(const std::vector<Check>& checks) {
  bool any_fail = false;
  bool any_indet = false;
  for (const auto& c : checks) {
    any_fail = any_fail || c.status == "fail";
    any_indet = any_indet || c.status == "indeterminate";
  }
  return any_fail ? "fail" : (any_indet ? "indeterminate" : "pass");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    throw UsageError("cannot open output file " + out_path);
  }
  f << text;
}

std::string render_json(const Document& d) {
  std::ostringstream os;
  write_json(os, d.to_json(), 0);
  os << "\n";
  return os.str();
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return Format::Text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polygamma complete-monotonicity toolkit"};
  app.set_version_flag("--version", PSICM_VERSION);
  app.require_subcommand(1);

  std::string format = "json";
  std::string out_path;
  auto* classify = app.add_subcommand("classify", "Classify a parameter triple (i, alpha, beta)");
  unsigned c_i = 1;
  double c_alpha = 0.0;
  double c_beta = 0.0;
  classify->add_option("--i", c_i, "Polygamma order i >= 1")->required();
  classify->add_option("--alpha", c_alpha, "Exponent alpha")->required();
  classify->add_option("--beta", c_beta, "Shift beta >= 0")->required();

  auto* threshold = app.add_subcommand("threshold", "Tabulate alpha*(i, beta) on a uniform beta grid");
  unsigned t_i = 1;
  double t_lo = 0.01;
  double t_hi = 0.49;
  unsigned t_count = 49;
  threshold->add_option("--i", t_i, "Polygamma order i >= 1")->capture_default_str();
  threshold->add_option("--beta-lo", t_lo, "Lower end of the beta grid")->capture_default_str();
  threshold->add_option("--beta-hi", t_hi, "Upper end of the beta grid")->capture_default_str();
  threshold->add_option("--count", t_count, "Number of grid points")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  VerifyOptions vo;
  std::string spacing = "log";
  double alpha_offset = 0.0;
  double beta_override = 0.0;
  verify->add_option("--suite", vo.suite, "Suite to run")
      ->check(CLI::IsMember({"theorem1", "theorem3", "corollary2", "corollary4", "identities", "all"}))
      ->capture_default_str();
  verify->add_option("--grid-lo", vo.grid.lo, "Scan grid lower end")->capture_default_str();
  verify->add_option("--grid-hi", vo.grid.hi, "Scan grid upper end")->capture_default_str();
  verify->add_option("--grid-count", vo.grid.count, "Scan grid points")->capture_default_str();
  verify->add_option("--spacing", spacing, "Scan grid spacing")->check(CLI::IsMember({"log", "linear"}))->capture_default_str();
  verify->add_option("--k-max", vo.k_max, "Highest derivative order scanned")->capture_default_str();
  verify->add_option("--tolerance", vo.tolerance, "Relative scan tolerance")->capture_default_str();
  auto* ao = verify->add_option("--alpha-offset", alpha_offset, "Scan alpha = i + offset instead of the default matrix");
  auto* bo = verify->add_option("--beta", beta_override, "Scan this beta instead of the default matrix");
  verify->add_option("--i", vo.orders, "Restrict to these orders i");

  for (auto* sub : {classify, threshold, verify}) {
    sub->add_option("--format", format, "Output format (json, csv, text)")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    sub->add_option("--out", out_path, "Write the report to this path instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const Format fmt = parse_format(format);
  Document doc;
  try {
    if (classify->parsed()) {
      if (c_i < 1) throw UsageError("--i must be >= 1");
      if (!(c_beta >= 0.0)) throw UsageError("--beta must be >= 0");
      const psicm::KernelParams p{c_i, c_alpha, c_beta};
      const auto c = psicm::classify(p);
      doc.command = "classify";
      doc.parameters = params_json(p);
      doc.results = {{"monotonicity", std::string(psicm::to_string(c.monotonicity))},
                     {"complete_monotonicity", std::string(psicm::to_string(c.complete_monotonicity))},
                     {"rule", c.rule}};
      if (c.threshold) doc.results["alpha_star"] = *c.threshold;
      if (fmt == Format::Json) {
        emit(render_json(doc), out_path);
      } else if (fmt == Format::Csv) {
        std::string s = "i,alpha,beta,monotonicity,complete_monotonicity,alpha_star\n";
        s += std::to_string(c_i) + "," + fmt_double(c_alpha, 17) + "," + fmt_double(c_beta, 17) + "," +
             std::string(psicm::to_string(c.monotonicity)) + "," + std::string(psicm::to_string(c.complete_monotonicity)) +
             "," + (c.threshold ? fmt_double(*c.threshold, 17) : "") + "\n";
        emit(s, out_path);
      } else {
        std::string s = params_name(p) + "\n";
        s += "monotonicity: " + std::string(psicm::to_string(c.monotonicity)) + "\n";
        s += "complete monotonicity: " + std::string(psicm::to_string(c.complete_monotonicity)) + "\n";
        s += "rule: " + c.rule + "\n";
        if (c.threshold) s += "alpha*: " + fmt_double(*c.threshold, 6) + "\n";
        emit(s, out_path);
      }
      return kExitPass;
    }

    if (threshold->parsed()) {
      if (t_i < 1) throw UsageError("--i must be >= 1");
      if (!(0.0 < t_lo && t_lo < t_hi && t_hi < 0.5)) throw UsageError("need 0 < beta-lo < beta-hi < 1/2");
      if (t_count < 2) throw UsageError("--count must be >= 2");
      doc.command = "threshold";
      doc.parameters = {{"i", t_i}, {"beta_lo", t_lo}, {"beta_hi", t_hi}, {"count", t_count}};
      const auto betas = psicm::GridSpec{t_lo, t_hi, t_count, psicm::Spacing::Linear}.points();
      json rows = json::array();
      std::string csv = "beta,s,alpha_star\n";
      std::string text = "beta        s           alpha_star\n";
      for (double beta : betas) {
        const auto tp = psicm::threshold_point(t_i, beta);
        rows.push_back({{"beta", tp.beta}, {"s", tp.s}, {"alpha_star", tp.alpha_star}});
        csv += fmt_double(tp.beta, 17) + "," + fmt_double(tp.s, 17) + "," + fmt_double(tp.alpha_star, 17) + "\n";
        char line[96];
        std::snprintf(line, sizeof line, "%-11.6g %-11.6g %.6g\n", tp.beta, tp.s, tp.alpha_star);
        text += line;
      }
      doc.results = {{"rows", rows}};
      emit(fmt == Format::Json ? render_json(doc) : (fmt == Format::Csv ? csv : text), out_path);
      return kExitPass;
    }

    // verify
    vo.grid.spacing = spacing == "linear" ? psicm::Spacing::Linear : psicm::Spacing::Log;
    vo.grid.validate();
    if (vo.k_max > psicm::kMaxScanOrder) throw UsageError("--k-max must be <= " + std::to_string(psicm::kMaxScanOrder));
    if (!(vo.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
    for (unsigned i : vo.orders) {
      if (i < 1) throw UsageError("--i must be >= 1");
    }
    if (ao->count() > 0) vo.alpha_offset = alpha_offset;
    if (bo->count() > 0) {
      if (!(beta_override >= 0.0)) throw UsageError("--beta must be >= 0");
      vo.beta = beta_override;
    }

    std::vector<Check> checks;
    auto add = [&](const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); };
    const bool all = vo.suite == "all";
    if (all || vo.suite == "theorem1") add(guarded("theorem1", [&] { return suite_theorem1(vo); }));
    if (all || vo.suite == "theorem3") add(guarded("theorem3", [&] { return suite_theorem3(vo); }));
    if (all || vo.suite == "corollary2") add(guarded("corollary2", [] { return suite_corollary2(); }));
    if (all || vo.suite == "corollary4") add(guarded("corollary4", [&] { return suite_corollary4(vo); }));
    if (all || vo.suite == "identities") add(guarded("identities", [&] { return suite_identities(vo); }));

    doc.command = "verify";
    doc.parameters = {{"suite", vo.suite},         {"grid", grid_json(vo.grid)}, {"k_max", vo.k_max},
                      {"tolerance", vo.tolerance}, {"orders", vo.orders}};
    if (vo.alpha_offset) doc.parameters["alpha_offset"] = *vo.alpha_offset;
    if (vo.beta) doc.parameters["beta"] = *vo.beta;
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(check_json(c));
    doc.results = {{"checks", arr}};
    doc.status = aggregate(checks);

    if (fmt == Format::Json) {
      emit(render_json(doc), out_path);
    } else if (fmt == Format::Csv) {
      std::string s = "suite,name,status\n";
      for (const auto& c : checks) s += c.suite + "," + c.name + "," + c.status + "\n";
      emit(s, out_path);
    } else {
      std::string s;
      for (const auto& c : checks) {
        s += "[" + c.status + "] " + c.suite + " " + c.name + ": " + c.claim + "\n";
      }
      s += "status: " + doc.status + "\n";
      emit(s, out_path);
    }
    return doc.status == "fail" ? kExitFail : kExitPass;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const psicm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const psicm::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
