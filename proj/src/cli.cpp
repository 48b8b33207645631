#include "shallit/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "parallel.hpp"
#include "shallit/analysis.hpp"
#include "shallit/budget.hpp"
#include "shallit/constants.hpp"
#include "shallit/solver.hpp"

namespace shallit::cli {

namespace {

constexpr int kFallbackDigits = 50;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

struct Options {
  int digits = kFallbackDigits;
  std::string n_text;
  std::string format = "text";
  std::string output;
  std::string quantity = "C_gap";
  int terms = 80;
  bool with_s = false;
};

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  std::string list;
  for (const char* f : allowed) list += (list.empty() ? "" : ", ") + std::string(f);
  throw UsageError("format '" + o.format + "' is not available here (use " + list + ")");
}

std::pair<int, int> n_range(const Options& o, std::pair<int, int> fallback) {
  if (o.n_text.empty()) return fallback;
  std::pair<int, int> r;
  try {
    r = parse_range(o.n_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--n: ") + e.what());
  }
  if (r.first < 1) throw UsageError("--n: trajectory lengths start at 1");
  return r;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string cmd_constant(const Options& o) {
  require_format(o, {"text", "json"});
  const LimitReport r = compute_limits(o.digits, o.with_s);
  if (o.format == "json") return dump(limit_report_to_json(r, o.digits));
  std::string out = real_to_decimal(r.C, o.digits) + "\n";
  if (r.has_s) out += "2S+1 = " + real_to_decimal(2 * r.S + 1, o.digits) + "\n";
  return out;
}

std::string cmd_p0star(const Options& o) {
  require_format(o, {"text", "json"});
  const Budget b = plan_budget(o.digits);
  const Real p0 = p0_limit(o.digits);
  if (o.format == "json") {
    return dump({{"p0_star", real_to_decimal(p0, o.digits)},
                 {"digits", o.digits},
                 {"n_used", b.n}});
  }
  return real_to_decimal(p0, o.digits) + "\n";
}

std::string cmd_trajectory(const Options& o) {
  require_format(o, {"text", "csv", "json"});
  const auto [lo, hi] = n_range(o, {10, 10});
  if (lo != hi) throw UsageError("trajectory takes a single --n");
  const Trajectory t = solve_trajectory(lo, PrecCtx(o.digits));
  if (o.format == "json") return dump(trajectory_to_json(t, o.digits));
  return trajectory_to_csv(t, o.digits);
}

std::string cmd_cn(const Options& o) {
  require_format(o, {"text", "csv", "json"});
  const auto [lo, hi] = n_range(o, {1, 20});
  const PrecCtx ctx(o.digits);
  const auto reports = detail::parallel_map(static_cast<std::size_t>(hi - lo + 1), [&](std::size_t i) {
    return compute_constants(lo + static_cast<int>(i), ctx);
  });
  if (o.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(constants_report_to_json(r, o.digits));
    return dump(arr);
  }
  std::ostringstream out;
  const char sep = o.format == "csv" ? ',' : ' ';
  out << "n" << sep << "A_n" << sep << "C_n\n";
  for (const auto& r : reports) {
    out << r.n << sep << real_to_decimal(r.a_n, o.digits) << sep
        << real_to_decimal(r.c_n_traj, o.digits) << '\n';
  }
  return out.str();
}

std::string cmd_rates(const Options& o) {
  require_format(o, {"text", "csv", "json"});
  RateQuantity q;
  try {
    q = parse_rate_quantity(o.quantity);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto [lo, hi] = n_range(o, q == RateQuantity::LambdaStar ? std::pair{5, 40} : std::pair{20, 100});
  const RateReport r = fit_rate(q, lo, hi, PrecCtx(o.digits));
  if (o.format == "json") return dump(rate_report_to_json(r));
  if (o.format == "csv") return rate_report_to_csv(r);
  std::ostringstream out;
  out << rate_report_to_csv(r);
  out << "band = [" << real_to_sci(r.band_lo, 12) << ", " << real_to_sci(r.band_hi, 12) << "]\n";
  out << "ratio_estimate = " << real_to_sci(r.ratio_estimate, 12) << " (expected "
      << real_to_sci(r.expected_ratio, 12) << ")\n";
  return out.str();
}

std::string cmd_slope(const Options& o) {
  require_format(o, {"text", "json"});
  if (o.terms < 2) throw UsageError("--terms must be at least 2");
  // The intercept must carry terms*log10(rho) digits beyond the guard.
  const int need = static_cast<int>(std::ceil(o.terms * log10_rho())) + 20;
  const int digits = std::max(o.digits, need);
  const Real p0 = p0_limit(digits);
  const SlopeResult r = slope_sigma(p0, o.terms, PrecCtx(digits));
  if (o.format == "json") {
    nlohmann::json j = slope_result_to_json(r);
    j["minus_inverse_p0_star"] = real_to_decimal(-1 / p0, 20);
    return dump(j);
  }
  std::ostringstream out;
  out << "sigma = " << real_to_decimal(r.sigma, 20) << "\n"
      << "residual = " << real_to_sci(r.residual) << "\n"
      << "terms = " << r.terms << "\n"
      << "-1/p0* = " << real_to_decimal(-1 / p0, 20) << "\n";
  return out.str();
}

std::string cmd_verify(const Options& o, bool& failed) {
  require_format(o, {"text", "json"});
  const auto [lo, hi] = n_range(o, {1, 20});
  std::vector<int> ns;
  for (int n = lo; n <= hi; ++n) ns.push_back(n);
  const VerificationReport r = run_invariant_suite(ns, PrecCtx(o.digits));
  failed = !r.all_pass();
  if (o.format == "json") return dump(verification_report_to_json(r));
  return verification_report_to_text(r);
}

std::string cmd_plan(const Options& o) {
  require_format(o, {"text", "json"});
  const Budget b = plan_budget(o.digits);
  if (o.format == "json") return dump(budget_to_json(b));
  std::ostringstream out;
  out << "target_digits = " << b.target_digits << "\n"
      << "n = " << b.n << "\n"
      << "series_terms = " << b.series_terms << "\n"
      << "working_digits = " << b.working_digits << "\n";
  return out.str();
}

}  // namespace

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int v = parse_int(text);
    return {v, v};
  }
  const int a = parse_int(std::string_view(text).substr(0, dots));
  const int b = parse_int(std::string_view(text).substr(dots + 2));
  if (b < a) throw std::invalid_argument("empty range '" + text + "'");
  return {a, b};
}

int default_digits() {
  if (const char* env = std::getenv("SHALLIT_DIGITS")) {
    try {
      const int d = parse_int(env);
      if (d >= PrecCtx::kMinDigits) return d;
    } catch (const std::invalid_argument&) {
    }
  }
  return kFallbackDigits;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-precision computation and verification of Shallit's constant"};
  app.require_subcommand(1);

  Options o;
  o.digits = default_digits();
  std::string chosen;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--digits", o.digits, "decimal digits (default 50, or $SHALLIT_DIGITS)");
    sub->add_option("--format", o.format, "text, csv or json");
    sub->add_option("--output", o.output, "write results to this file");
    sub->callback([&chosen, name] { chosen = name; });
    return sub;
  };
  add("constant", "the limit constant C")
      ->add_flag("--with-s", o.with_s, "also report the partial sum S and 2S+1");
  add("p0star", "the limit intercept p0*");
  add("trajectory", "a solved trajectory")->add_option("--n", o.n_text, "trajectory length");
  add("cn", "A_n and C_n over a range of n")->add_option("--n", o.n_text, "n or a..b");
  CLI::App* rates = add("rates", "scaled convergence gaps");
  rates->add_option("--n", o.n_text, "range a..b");
  rates->add_option("--quantity", o.quantity, "C_gap, p0_gap, lambda_star or u_mid_gap");
  add("slope", "slope of the stable curve at the intercept")
      ->add_option("--terms", o.terms, "derivative-sum terms (default 80)");
  add("verify", "invariant suite")->add_option("--n", o.n_text, "n or a..b");
  add("plan", "precision and iteration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  bool failed = false;
  std::string result;
  try {
    if (o.digits < PrecCtx::kMinDigits) {
      throw UsageError("--digits must be at least " + std::to_string(PrecCtx::kMinDigits));
    }
    if (chosen == "constant") result = cmd_constant(o);
    else if (chosen == "p0star") result = cmd_p0star(o);
    else if (chosen == "trajectory") result = cmd_trajectory(o);
    else if (chosen == "cn") result = cmd_cn(o);
    else if (chosen == "rates") result = cmd_rates(o);
    else if (chosen == "slope") result = cmd_slope(o);
    else if (chosen == "verify") result = cmd_verify(o, failed);
    else if (chosen == "plan") result = cmd_plan(o);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }

  if (o.output.empty()) {
    out << result;
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!(file << result)) {
      err << "error: cannot write " << o.output << "\n";
      return kComputationError;
    }
  }
  return failed ? kComputationError : kOk;
}

}  // namespace shallit::cli
