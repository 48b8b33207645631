#include "shallit/constants.hpp"

#include <algorithm>
#include <cmath>

#include "shallit/solver.hpp"

namespace shallit {

Real a_n(const Trajectory& traj) {
  Real sum(0, traj[0].p.bits());
  for (const auto& pt : traj.points()) sum += pt.p + pt.u + pt.p * pt.u;
  return sum;
}

Real c_n_direct(const Trajectory& traj) { return 3L * traj.n() - a_n(traj); }

Real c_n_traj(const Trajectory& traj) {
  const int k = traj.midpoint();
  Real sum(0, traj[0].p.bits());
  for (int j = 0; j < k; ++j) sum += 3 - 2 * traj[j].p - traj[j].p * traj[j].u;
  return 2 * sum + traj[k].p * traj[k].p;
}

Real c_n_traj_prime(const Trajectory& traj) {
  const int k = traj.midpoint();
  Real sum(0, traj[0].p.bits());
  for (int j = 1; j <= k; ++j) {
    sum += (traj.lambda(j - 1) - 3 * traj.lambda(j)) / (1 - traj.lambda(j));
  }
  return 2 * sum + traj[k].p * traj[k].p;
}

std::vector<Real> c_n_quad_terms(const Trajectory& traj) {
  const int k = traj.midpoint();
  std::vector<Real> terms;
  terms.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const Real& l = traj.lambda(j);
    terms.push_back(l * (traj.lambda(j - 1) - 2 * l) / traj[j].u);
  }
  return terms;
}

Real c_n_quad(const Trajectory& traj) {
  const Real& pk = traj[traj.midpoint()].p;
  Real sum(0, traj[0].p.bits());
  for (const auto& t : c_n_quad_terms(traj)) sum += t;
  const Real off = pk - 1;
  return 2 * sum + (1 - off * off);
}

Real ConstantsReport::max_disagreement() const {
  const Real* values[] = {&c_n_direct, &c_n_traj, &c_n_traj_prime, &c_n_quad};
  Real worst(0, c_n_direct.bits());
  for (const Real* a : values) {
    for (const Real* b : values) worst = std::max(worst, abs(*a - *b));
  }
  return worst;
}

ConstantsReport constants_report(const Trajectory& traj, int digits) {
  ConstantsReport r;
  r.n = traj.n();
  r.a_n = a_n(traj);
  r.c_n_direct = 3L * traj.n() - r.a_n;
  r.c_n_traj = c_n_traj(traj);
  r.c_n_traj_prime = c_n_traj_prime(traj);
  r.c_n_quad = c_n_quad(traj);
  r.digits = digits;
  return r;
}

ConstantsReport compute_constants(int n, const PrecCtx& ctx) {
  return constants_report(solve_trajectory(n, ctx), ctx.digits());
}

int s_partial_min_length(int N, int target_digits) {
  return 2 * N + static_cast<int>(std::ceil(target_digits / log10_rho()));
}

Real s_partial(const Trajectory& limit, int N, int target_digits) {
  if (N < 0) throw std::invalid_argument("partial sum index must be non-negative");
  const int needed = s_partial_min_length(N, target_digits);
  if (limit.n() < needed) {
    throw PrecisionError("limit trajectory of length " + std::to_string(limit.n()) +
                         " is too short for S_" + std::to_string(N) + " at " +
                         std::to_string(target_digits) + " digits (needs " + std::to_string(needed) +
                         ")");
  }
  Real sum(0, limit[0].p.bits());
  for (int j = 0; j <= N; ++j) sum += 3 - 2 * limit[j].p - limit[j].p * limit[j].u;
  return sum;
}

std::vector<Real> cubic_series_terms(const Real& p0_star, int terms, const PrecCtx& ctx) {
  if (terms < 0) throw std::invalid_argument("negative number of series terms");
  const mpfr_prec_t bits = std::max(ctx.bits(), p0_star.bits());

  // u_1 .. u_{terms+1}
  std::vector<Real> u;
  u.reserve(static_cast<std::size_t>(terms) + 2);
  Point pt{p0_star.with_bits(bits), Real(0, bits)};
  u.push_back(pt.u);
  for (int j = 0; j <= terms; ++j) {
    if (pt.p.sign() <= 0) {
      throw PrecisionError("orbit from the intercept estimate left p > 0 at step " +
                           std::to_string(j) + "; the intercept is not accurate enough for " +
                           std::to_string(terms) + " terms");
    }
    pt = phi_map(pt);
    u.push_back(pt.u);
  }

  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(terms));
  for (int j = 1; j <= terms; ++j) {
    const Real& uj = u[static_cast<std::size_t>(j)];
    const Real& uj1 = u[static_cast<std::size_t>(j) + 1];
    const Real l = 1 - uj;
    const Real l1 = 1 - uj1;
    out.push_back(l * l * (l1 - 2 * l + l * l1) / (uj * uj1));
  }
  return out;
}

Real c_cubic_series(const Real& p0_star, int terms, const PrecCtx& ctx) {
  Real sum = p0_star.with_bits(std::max(ctx.bits(), p0_star.bits()));
  for (const auto& t : cubic_series_terms(p0_star, terms, ctx)) sum += t;
  return sum;
}

LimitReport compute_limits(int digits, bool with_s, int guard) {
  const Budget budget = plan_budget(digits, guard);
  const PrecCtx ctx(std::max(digits, PrecCtx::kMinDigits), guard);
  const double lr = log10_rho();

  // An intercept error e lets the orbit drift by e rho^j from the stable
  // curve, and the series picks that drift up cubically at its last term.
  // Ask for (e rho^T)^3 <= 10^-(digits + 6): with T = series_terms the
  // planner's own n leaves this at about one unit in the last place.
  const int intercept_digits = std::max(
      digits, static_cast<int>(std::ceil(budget.series_terms * lr + (digits + 6) / 3.0)));
  const PrecCtx intercept_ctx(std::max(intercept_digits, PrecCtx::kMinDigits), guard);

  LimitReport r;
  r.digits = digits;
  r.n_used = std::max(budget.n, static_cast<int>(std::ceil(intercept_digits / lr)) + 1);
  r.terms_used = budget.series_terms;
  r.p0_star = solve_p0(r.n_used, intercept_ctx).p0;

  const std::vector<Real> terms = cubic_series_terms(r.p0_star, budget.series_terms, intercept_ctx);
  r.C = r.p0_star;
  for (const auto& t : terms) r.C += t;

  // Terms shrink by rho^-3 per step; the intercept sits rho^-n below its
  // limit, and its drift returns cubed at the last term.
  const Real rh = rho(intercept_ctx);
  const Real shrink = 1 / (rh * rh * rh);
  const Real tail = terms.empty() ? Real(0, ctx) : abs(terms.back()) * shrink / (1 - shrink);
  const Real drift = 2 * pow(rh, budget.series_terms) / pow(rh, r.n_used);
  r.error_bound = tail + 2 / pow(rh, r.n_used) + drift * drift * drift;

  if (with_s) {
    r.s_terms = budget.n;
    r.s_trajectory_n = s_partial_min_length(r.s_terms, digits);
    const Trajectory limit = solve_trajectory(r.s_trajectory_n, ctx);
    r.S = s_partial(limit, r.s_terms, digits);
    r.has_s = true;
  }
  return r;
}

nlohmann::json constants_report_to_json(const ConstantsReport& r, int places) {
  return {{"n", r.n},
          {"digits", r.digits},
          {"A_n", real_to_decimal(r.a_n, places)},
          {"C_n_direct", real_to_decimal(r.c_n_direct, places)},
          {"C_n_traj", real_to_decimal(r.c_n_traj, places)},
          {"C_n_traj_prime", real_to_decimal(r.c_n_traj_prime, places)},
          {"C_n_quad", real_to_decimal(r.c_n_quad, places)}};
}

nlohmann::json limit_report_to_json(const LimitReport& r, int places) {
  nlohmann::json j = {{"C", real_to_decimal(r.C, places)},
                      {"p0_star", real_to_decimal(r.p0_star, places)},
                      {"terms_used", r.terms_used},
                      {"n_used", r.n_used},
                      {"digits", r.digits},
                      {"error_bound", real_to_sci(r.error_bound)}};
  if (r.has_s) {
    j["S"] = real_to_decimal(r.S, places);
    j["S_terms"] = r.s_terms;
    j["S_trajectory_n"] = r.s_trajectory_n;
    j["two_S_plus_one"] = real_to_decimal(2 * r.S + 1, places);
  }
  return j;
}

nlohmann::json budget_to_json(const Budget& b) {
  return {{"target_digits", b.target_digits},
          {"n", b.n},
          {"series_terms", b.series_terms},
          {"working_digits", b.working_digits}};
}

}  // namespace shallit
