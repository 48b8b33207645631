#include "shallit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "shallit/constants.hpp"
#include "shallit/oracle.hpp"
#include "shallit/solver.hpp"

namespace shallit {

namespace {

Real from_double(double d, mpfr_prec_t bits) {
  Real r(0, bits);
  mpfr_set_d(r.get(), d, MPFR_RNDN);
  return r;
}

Real pow2(long e, mpfr_prec_t bits) {
  Real r(1, bits);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

int reference_digits_for(const PrecCtx& ctx) {
  return static_cast<int>(std::ceil(1.5 * ctx.digits()));
}

// Smallest gap a measurement at ctx can resolve.
Real resolution(const PrecCtx& ctx) { return pow10(-(ctx.digits() - 10), ctx.bits()); }

// A check "residual <= tol" (or "< tol" when strict) recorded with its inputs.
CheckResult make_check(std::string name, std::string formula, int n, Real residual, Real tol,
                       bool strict = false) {
  CheckResult c;
  c.name = std::move(name);
  c.paper_ref = std::move(formula);
  c.n = n;
  c.pass = residual.is_finite() && (strict ? residual < tol : residual <= tol);
  c.residual = std::move(residual);
  c.tolerance = std::move(tol);
  return c;
}

// Inequalities are recorded as residual = -(worst slack) against tolerance 0.
CheckResult make_inequality(std::string name, std::string formula, int n, const Real& min_slack,
                            bool strict) {
  return make_check(std::move(name), std::move(formula), n, -min_slack,
                    Real(0, min_slack.bits()), strict);
}

Real max_of(const Real& a, const Real& b) { return a < b ? b : a; }
Real min_of(const Real& a, const Real& b) { return b < a ? b : a; }

}  // namespace

// ---------------------------------------------------------------- rates

const char* rate_quantity_name(RateQuantity q) {
  switch (q) {
    case RateQuantity::CGap: return "C_gap";
    case RateQuantity::P0Gap: return "p0_gap";
    case RateQuantity::LambdaStar: return "lambda_star";
    case RateQuantity::UMidGap: return "u_mid_gap";
  }
  return "?";
}

RateQuantity parse_rate_quantity(const std::string& name) {
  for (auto q : {RateQuantity::CGap, RateQuantity::P0Gap, RateQuantity::LambdaStar,
                 RateQuantity::UMidGap}) {
    if (name == rate_quantity_name(q)) return q;
  }
  throw std::invalid_argument("unknown rate quantity '" + name +
                              "' (expected C_gap, p0_gap, lambda_star or u_mid_gap)");
}

RateReport fit_rate(RateQuantity q, int lo, int hi, const PrecCtx& ctx) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("rate range must satisfy 1 <= lo <= hi");
  const int ref_digits = reference_digits_for(ctx);
  const PrecCtx ref_ctx(ref_digits, ctx.guard());
  const mpfr_prec_t bits = ref_ctx.bits();
  const std::size_t count = static_cast<std::size_t>(hi - lo + 1);

  RateReport r;
  r.quantity = q;
  r.reference_digits = ref_digits;
  const Real rh = rho(ref_ctx);

  std::vector<Real> gaps;
  Real floor_gap = resolution(ctx);
  switch (q) {
    case RateQuantity::CGap: {
      const Real c_ref = compute_limits(ref_digits, false, ctx.guard()).C;
      gaps = detail::parallel_map(count, [&](std::size_t i) {
        return Real(c_ref - c_n_traj(solve_trajectory(lo + static_cast<int>(i), ctx)));
      });
      break;
    }
    case RateQuantity::P0Gap: {
      const Real p0_ref = p0_limit(ref_digits, ctx.guard());
      gaps = detail::parallel_map(count, [&](std::size_t i) {
        return Real(p0_ref - solve_p0(lo + static_cast<int>(i), ctx).p0);
      });
      break;
    }
    case RateQuantity::LambdaStar: {
      // The limit coordinates come from one long trajectory at reference precision.
      const Trajectory limit = solve_trajectory(s_partial_min_length(hi, ref_digits), ref_ctx);
      for (int j = lo; j <= hi; ++j) gaps.push_back(limit.lambda(j));
      floor_gap = resolution(ref_ctx);
      break;
    }
    case RateQuantity::UMidGap: {
      gaps = detail::parallel_map(count, [&](std::size_t i) {
        const Trajectory t = solve_trajectory(lo + static_cast<int>(i), ctx);
        return abs(t[t.midpoint()].u - 1);
      });
      break;
    }
  }

  const Real base = q == RateQuantity::UMidGap ? sqrt(rh) : rh;
  r.expected_ratio = 1 / base;
  for (std::size_t i = 0; i < count; ++i) {
    const int idx = lo + static_cast<int>(i);
    if (!(gaps[i] > floor_gap)) {
      throw PrecisionError(std::string(rate_quantity_name(q)) + " at index " +
                           std::to_string(idx) + " is " + real_to_sci(gaps[i]) +
                           ", not resolved above " + real_to_sci(floor_gap) +
                           "; raise --digits or shrink the range");
    }
    RateSample s;
    s.index = idx;
    s.scaled = gaps[i] * pow(base, idx);
    s.gap = gaps[i];
    if (i == 0) {
      r.band_lo = s.scaled;
      r.band_hi = s.scaled;
    } else {
      r.band_lo = min_of(r.band_lo, s.scaled);
      r.band_hi = max_of(r.band_hi, s.scaled);
      r.successive_ratios.push_back(gaps[i] / gaps[i - 1]);
    }
    r.samples.push_back(std::move(s));
  }

  if (count >= 3) {
    const Real per_two = gaps[count - 1] / gaps[count - 3];
    r.ratio_estimate = sqrt(per_two);
  } else if (count == 2) {
    r.ratio_estimate = r.successive_ratios.back();
  } else {
    r.ratio_estimate = Real(0, bits);
  }
  return r;
}

std::string rate_report_to_csv(const RateReport& r) {
  std::ostringstream out;
  out << "n,gap,gap_times_rho_pow\n";
  for (const auto& s : r.samples) {
    out << s.index << ',' << real_to_sci(s.gap, 20) << ',' << real_to_sci(s.scaled, 20) << '\n';
  }
  return out.str();
}

nlohmann::json rate_report_to_json(const RateReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"n", s.index},
                       {"gap", real_to_sci(s.gap, 20)},
                       {"gap_times_rho_pow", real_to_sci(s.scaled, 20)}});
  }
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& x : r.successive_ratios) ratios.push_back(real_to_sci(x, 20));
  return {{"quantity", rate_quantity_name(r.quantity)},
          {"reference_digits", r.reference_digits},
          {"band_lo", real_to_sci(r.band_lo, 20)},
          {"band_hi", real_to_sci(r.band_hi, 20)},
          {"ratio_estimate", real_to_sci(r.ratio_estimate, 20)},
          {"expected_ratio", real_to_sci(r.expected_ratio, 20)},
          {"successive_ratios", ratios},
          {"samples", samples}};
}

// ---------------------------------------------------------------- slope

namespace {

// F(sigma) - sigma for the truncated derivative-sum equation.
Real slope_defect(const Real& sigma, const Real& p0, int terms) {
  TangentState ts{Point{p0, Real(0, p0.bits())}, Real(-1, p0.bits()), -sigma, Real(0, p0.bits()),
                  Real(0, p0.bits())};
  Real sum(0, p0.bits());
  for (int j = 1; j <= terms; ++j) {
    ts = tangent_step(ts, false);
    sum += ts.dp - ts.du;
  }
  // Divided by dp_0 = -1.
  const Real f = -(1 - sum) / p0;
  return f - sigma;
}

struct SigmaSolve {
  Real sigma;
  Real last_step;
  int iterations = 0;
};

// The truncated equation is affine in sigma with slope ~ rho^terms, so plain
// substitution diverges; secant converges in a couple of steps.
SigmaSolve solve_sigma(const Real& p0, int terms, const Real& stop) {
  constexpr int kCap = 100;
  const mpfr_prec_t bits = p0.bits();
  Real a(-1, bits);
  Real b = Real(-3, bits) / 2;
  Real ga = slope_defect(a, p0, terms);
  Real gb = slope_defect(b, p0, terms);
  SigmaSolve out;
  for (int it = 1; it <= kCap; ++it) {
    out.iterations = it;
    if (gb.is_zero() || gb == ga) {
      out.sigma = b;
      out.last_step = abs(b - a);
      return out;
    }
    Real c = b - gb * (b - a) / (gb - ga);
    Real step = abs(c - b);
    a = std::move(b);
    ga = std::move(gb);
    b = std::move(c);
    gb = slope_defect(b, p0, terms);
    if (step <= stop) {
      out.sigma = b;
      out.last_step = step;
      return out;
    }
  }
  throw std::runtime_error("slope iteration did not converge in " + std::to_string(kCap) +
                           " iterations; last iterates " + real_to_sci(a, 12) + ", " +
                           real_to_sci(b, 12));
}

}  // namespace

SlopeResult slope_sigma(const Real& p0_star, int terms, const PrecCtx& ctx) {
  if (terms < 2) throw std::invalid_argument("slope needs at least 2 terms");
  if (p0_star.sign() <= 0) throw std::invalid_argument("intercept must be positive");
  const Real p0 = p0_star.with_bits(std::max(ctx.bits(), p0_star.bits()));
  const Real stop = pow10(-ctx.digits(), p0.bits());

  const SigmaSolve full = solve_sigma(p0, terms, stop);
  const SigmaSolve half = solve_sigma(p0, (terms + 1) / 2, stop);

  SlopeResult r;
  r.sigma = full.sigma;
  r.iterations = full.iterations;
  r.terms = terms;
  r.residual = max_of(full.last_step, abs(full.sigma - half.sigma));
  return r;
}

nlohmann::json slope_result_to_json(const SlopeResult& r) {
  return {{"sigma", real_to_decimal(r.sigma, 20)},
          {"iterations", r.iterations},
          {"terms", r.terms},
          {"residual", real_to_sci(r.residual)}};
}

// ---------------------------------------------------------------- convexity

int WronskianReport::evaluated() const {
  return static_cast<int>(std::count_if(samples.begin(), samples.end(),
                                        [](const WronskianSample& s) { return !s.skipped; }));
}

bool WronskianReport::holds() const {
  return std::all_of(samples.begin(), samples.end(), [&](const WronskianSample& s) {
    return s.skipped || (n == 0 ? s.wronskian.is_zero() : s.wronskian.sign() > 0);
  });
}

WronskianReport convexity_wronskian(int n, const std::vector<Real>& t_samples,
                                    const PrecCtx& ctx) {
  if (n < 0) throw std::invalid_argument("number of steps must be non-negative");
  const Real phi = golden_ratio(ctx);
  WronskianReport report;
  report.n = n;
  for (const auto& t_in : t_samples) {
    if (t_in.sign() <= 0 || t_in > phi) {
      throw std::invalid_argument("sample t = " + real_to_sci(t_in, 10) + " is outside (0, phi]");
    }
    const Real t = t_in.with_bits(std::max(ctx.bits(), t_in.bits()));
    const mpfr_prec_t bits = t.bits();
    TangentState ts{Point{t, Real(0, bits)}, Real(1, bits), Real(0, bits), Real(0, bits),
                    Real(0, bits)};
    WronskianSample s;
    s.t = t;
    for (int j = 0; j < n; ++j) {
      if (ts.base.p.sign() <= 0) {
        s.skipped = true;
        s.note = "orbit reached p <= 0 at step " + std::to_string(j) + "; t is outside D_n";
        break;
      }
      ts = tangent_step(ts, true);
    }
    if (!s.skipped) s.wronskian = ts.ddu * ts.dp - ts.du * ts.ddp;
    report.samples.push_back(std::move(s));
  }
  return report;
}

// ---------------------------------------------------------------- invariants

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

Real default_tolerance(const PrecCtx& ctx) { return pow10(-(ctx.digits() - 8), ctx.bits()); }

std::vector<CheckResult> check_trajectory(const Trajectory& traj, const Real& tol) {
  const int n = traj.n();
  const int k = traj.midpoint();
  const mpfr_prec_t bits = traj[0].p.bits();
  const Real zero(0, bits);
  std::vector<CheckResult> out;

  out.push_back(make_check("boundary", "u_0 = 0, p_n = 0", n,
                           max_of(abs(traj[0].u), abs(traj[n].p)), zero));

  Real cons = zero;
  for (int j = 1; j <= n; ++j) {
    const Point& a = traj[j - 1];
    const Point& b = traj[j];
    cons = max_of(cons, abs(b.p * b.u + b.u - a.p * a.u - a.p));
  }
  out.push_back(make_check("conservation", "p_j u_j + u_j = p_{j-1} u_{j-1} + p_{j-1}", n, cons,
                           tol));

  Real tele = zero;
  Real running = zero;
  for (int l = 1; l <= n; ++l) {
    running += traj[l - 1].p - traj[l].u;
    tele = max_of(tele, abs(running - traj[l].p * traj[l].u));
  }
  out.push_back(make_check("telescoped_conservation", "sum_{j<=l} (p_{j-1} - u_j) = p_l u_l", n,
                           tele, tol));

  Real sym = zero;
  for (int j = 0; j <= n; ++j) sym = max_of(sym, abs(traj[j].u - traj[n - j].p));
  out.push_back(make_check("symmetry", "u_j = p_{n-j}", n, sym, tol));

  // The forward half and the reflected half must join under one map step.
  Real seam = zero;
  if (k + 1 <= n && traj[k].p.sign() != 0) {
    const Point next = phi_map(traj[k]);
    seam = max_of(abs(next.p - traj[k + 1].p), abs(next.u - traj[k + 1].u));
  }
  out.push_back(make_check("seam", "phi(p_k, u_k) = (p_{k+1}, u_{k+1})", n, seam, tol));

  Real rec = zero;
  for (int j = 1; j <= n - 1; ++j) {
    const Real& lm = traj.lambda(j - 1);
    const Real& l = traj.lambda(j);
    const Real pred = (4 * l - lm - 2 * l * l) / (1 + 2 * l - lm - l * l);
    rec = max_of(rec, abs(traj.lambda(j + 1) - pred));
  }
  out.push_back(make_check(
      "lambda_recurrence",
      "lambda_{j+1} = (4 l_j - l_{j-1} - 2 l_j^2) / (1 + 2 l_j - l_{j-1} - l_j^2)", n, rec, tol));

  Real mid = n % 2 == 0 ? abs(traj[k].p - traj[k].u)
                        : max_of(abs(traj[k].p - 1), abs(traj[k + 1].u - 1));
  out.push_back(make_check("midpoint", n % 2 == 0 ? "p_k = u_k" : "p_k = u_{k+1} = 1", n,
                           std::move(mid), tol));

  // Strict inequalities; slack must stay positive.
  Real mono_p = traj[0].p - traj[1].p;
  Real mono_u = traj[1].u - traj[0].u;
  for (int j = 1; j < n; ++j) {
    mono_p = min_of(mono_p, traj[j].p - traj[j + 1].p);
    mono_u = min_of(mono_u, traj[j + 1].u - traj[j].u);
  }
  out.push_back(make_inequality("monotone_p", "p_0 > p_1 > ... > p_n", n, mono_p, true));
  out.push_back(make_inequality("monotone_u", "u_0 < u_1 < ... < u_n", n, mono_u, true));

  const Real phi = golden_ratio(PrecCtx(std::max(PrecCtx::kMinDigits, traj.digits())));
  out.push_back(make_inequality("p0_at_least_one", "p_0 >= 1", n, traj.p0() - 1, false));
  out.push_back(make_inequality("p0_below_phi", "p_0 < phi", n, phi - traj.p0(), true));

  Real pu = zero;
  Real exp_p = zero;
  Real exp_pu = zero;
  for (int j = 0; j <= n; ++j) {
    const Real one_minus_pu = 1 - traj[j].p * traj[j].u;
    const Real bound = pow2(-std::min(j, n - j), bits);
    const Real s_pu = one_minus_pu;
    const Real s_p = bound - abs(traj[j].p - 1);
    const Real s_pu_bound = phi * bound - one_minus_pu;
    if (j == 0) {
      pu = s_pu;
      exp_p = s_p;
      exp_pu = s_pu_bound;
    } else {
      pu = min_of(pu, s_pu);
      exp_p = min_of(exp_p, s_p);
      exp_pu = min_of(exp_pu, s_pu_bound);
    }
  }
  out.push_back(make_inequality("pu_below_one", "p_j u_j < 1", n, pu, true));
  out.push_back(make_inequality("exp_bound_p", "|p_j - 1| <= 2^-min(j, n-j)", n, exp_p, false));
  out.push_back(make_inequality("exp_bound_pu", "1 - p_j u_j <= phi 2^-min(j, n-j)", n, exp_pu,
                                false));
  return out;
}

VerificationReport run_invariant_suite(const std::vector<int>& n_list, const PrecCtx& ctx,
                                       const Real& tol_in) {
  VerificationReport report;
  if (n_list.empty()) return report;
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("trajectory length must be positive");
  }
  const Real tol = tol_in.sign() > 0 ? tol_in : default_tolerance(ctx);

  // Every n in the list plus its predecessor, for the cross-n checks.
  std::set<int> needed(n_list.begin(), n_list.end());
  for (int n : n_list) {
    if (n >= 2) needed.insert(n - 1);
  }
  const std::vector<int> order(needed.begin(), needed.end());
  const auto solved = detail::parallel_map(order.size(), [&](std::size_t i) {
    const Trajectory t = solve_trajectory(order[i], ctx);
    return std::make_pair(t, constants_report(t, ctx.digits()));
  });
  std::map<int, std::size_t> at;
  for (std::size_t i = 0; i < order.size(); ++i) at[order[i]] = i;

  const Real c_limit = compute_limits(ctx.digits(), false, ctx.guard()).C;

  for (int n : n_list) {
    const auto& [traj, cr] = solved[at[n]];
    for (auto& c : check_trajectory(traj, tol)) report.checks.push_back(std::move(c));

    report.checks.push_back(make_check("cn_four_way",
                                       "3n - A_n = C_n(traj) = C_n(traj') = C_n(quad)", n,
                                       cr.max_disagreement(), tol));
    report.checks.push_back(make_inequality("cn_lower", "C_n >= 1", n, cr.c_n_traj - 1, false));
    report.checks.push_back(make_inequality("cn_below_limit", "C_n < C", n, c_limit - cr.c_n_traj,
                                            true));

    if (n >= 2) {
      const auto& [prev, prev_cr] = solved[at[n - 1]];
      Real slack = traj[0].p - prev[0].p;
      for (int j = 1; j <= n - 1; ++j) slack = min_of(slack, traj[j].p - prev[j].p);
      report.checks.push_back(
          make_inequality("monotone_in_n", "p_{j,n} > p_{j,n-1}", n, slack, true));
      const Real diff = cr.c_n_traj - prev_cr.c_n_traj;
      report.checks.push_back(make_inequality("cn_increasing", "C_n > C_{n-1}", n, diff, true));
      if ((n - 1) % 2 == 0) {
        const Real lam = 1 - prev[prev.midpoint()].u;
        report.checks.push_back(make_inequality("cn_gap_lower_bound",
                                                "C_{m+1} - C_m > (1 - u_k)^2, m = n-1 = 2k", n,
                                                diff - lam * lam, true));
      }
    }

    if (n <= 8) {
      const oracle::MinimizeResult m = oracle::minimize_direct(n);
      const mpfr_prec_t bits = tol.bits();
      report.checks.push_back(make_check("oracle_A_n", "|A_n - min f_n| < 1e-8", n,
                                         from_double(std::abs(cr.a_n.to_double() - m.value), bits),
                                         from_double(1e-8, bits), true));
      report.checks.push_back(make_check("oracle_critical_point", "|grad g_n| < 1e-10", n,
                                         from_double(m.max_residual, bits),
                                         from_double(1e-10, bits), true));
      const double f = oracle::f_n(m.x);
      const double g = oracle::g_n(oracle::x_to_u(m.x));
      report.checks.push_back(make_check("oracle_f_equals_g", "|f_n(x) - g_n(u(x))| < 1e-12 f_n",
                                         n, from_double(std::abs(f - g) / f, bits),
                                         from_double(1e-12, bits), true));
      const oracle::XVector back = oracle::u_to_x(oracle::x_to_u(m.x));
      double trip = 0.0;
      for (std::size_t i = 0; i < back.x.size(); ++i) {
        trip = std::max(trip, std::abs(back.x[i] - m.x.x[i]) / m.x.x[i]);
      }
      report.checks.push_back(make_check("oracle_round_trip", "x -> u -> x", n,
                                         from_double(trip, bits), from_double(1e-12, bits), true));
      const double box = 3.0 * n - 1.0;
      double cube = 1.0;
      for (std::size_t j = 1; j < m.u.u.size(); ++j) {
        cube = std::min({cube, m.u.u[j] - 1.0 / box, box - m.u.u[j]});
      }
      report.checks.push_back(make_inequality("oracle_cube", "1/(3n-1) <= u_j <= 3n-1", n,
                                              from_double(cube, bits), false));
    }
  }
  return report;
}

std::string verification_report_to_text(const VerificationReport& r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %5s  %-12s %-12s %s\n", "check", "n", "residual",
                "tolerance", "result");
  out << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-26s %5d  %-12s %-12s %s\n", c.name.c_str(), c.n,
                  real_to_sci(c.residual).c_str(), real_to_sci(c.tolerance).c_str(),
                  c.pass ? "pass" : "FAIL");
    out << line;
  }
  out << r.checks.size() << " checks, " << r.failures() << " failed\n";
  return out.str();
}

nlohmann::json verification_report_to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"paper_ref", c.paper_ref},
                      {"n", c.n},
                      {"residual", real_to_sci(c.residual)},
                      {"tolerance", real_to_sci(c.tolerance)},
                      {"pass", c.pass}});
  }
  return {{"checks", checks}, {"total", r.checks.size()}, {"failed", r.failures()},
          {"all_pass", r.all_pass()}};
}

}  // namespace shallit
