#include "shallit/solver.hpp"

#include <algorithm>
#include <cmath>

#include "shallit/budget.hpp"

namespace shallit {

ResidualValue residual(int n, const Real& t, const PrecCtx& ctx) {
  if (n < 1) throw std::invalid_argument("trajectory length must be positive");
  if (t.sign() <= 0) throw std::invalid_argument("shooting parameter must be positive");
  const mpfr_prec_t bits = std::max(ctx.bits(), t.bits());
  const int k = n / 2;

  Point pt{t.with_bits(bits), Real(0, bits)};
  for (int j = 0; j < k; ++j) {
    if (pt.p.sign() <= 0) return ResidualValue{Real(-1, bits), true, j};
    pt = phi_map(pt);
  }
  Real value = (n % 2 == 1) ? pt.p - 1 : pt.p - pt.u;
  return ResidualValue{std::move(value), false, -1};
}

ShootResult solve_p0(int n, const PrecCtx& ctx, bool refine) {
  if (n < 1) throw std::invalid_argument("trajectory length must be positive");
  const mpfr_prec_t bits = ctx.bits();
  const Real tol = pow10(-(ctx.digits() + 2), bits);

  ShootResult out;
  out.n = n;
  out.digits = ctx.digits();

  Real lo(1, bits);
  Real hi = golden_ratio(ctx);
  ResidualValue r_lo = residual(n, lo, ctx);
  if (r_lo.value.is_zero()) {
    out.p0 = lo;
    out.residual = r_lo.value;
    out.bracket_lo = lo;
    out.bracket_hi = lo;
    return out;
  }
  ResidualValue r_hi = residual(n, hi, ctx);

  // Illinois-weighted endpoint values for the optional secant step.
  Real f_lo = r_lo.value;
  Real f_hi = r_hi.value;
  int last_side = 0;
  Real width_two_back = hi - lo;
  Real width_one_back = hi - lo;
  bool force_bisect = false;

  while (hi - lo > tol) {
    Real c = (lo + hi) / 2;
    const bool try_secant = refine && !force_bisect && !r_lo.crashed && !r_hi.crashed;
    if (try_secant) {
      Real s = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      if (s.is_finite() && s > lo && s < hi) c = std::move(s);
    }

    ResidualValue r_c = residual(n, c, ctx);
    ++out.iterations;
    if (r_c.value.is_zero()) {
      lo = c;
      hi = c;
      r_lo = r_c;
      r_hi = r_c;
      break;
    }
    if (r_c.value.sign() < 0) {
      lo = c;
      f_lo = r_c.value;
      r_lo = std::move(r_c);
      if (last_side == -1) f_hi = f_hi / 2;
      last_side = -1;
    } else {
      hi = c;
      f_hi = r_c.value;
      r_hi = std::move(r_c);
      if (last_side == 1) f_lo = f_lo / 2;
      last_side = 1;
    }

    // A secant step that fails to halve the bracket over two iterations
    // hands the next step to bisection.
    Real width = hi - lo;
    force_bisect = refine && width > width_two_back / 2;
    width_two_back = std::move(width_one_back);
    width_one_back = std::move(width);
  }

  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.p0 = (lo + hi) / 2;
  out.residual = residual(n, out.p0, ctx).value;
  return out;
}

PrecCtx conditioned_context(int n, const PrecCtx& ctx) {
  const int extra = static_cast<int>(std::ceil((n / 2) * log10_rho())) + 2;
  return ctx.widened(extra);
}

Trajectory solve_trajectory(int n, const PrecCtx& ctx) {
  const PrecCtx solve_ctx = conditioned_context(n, ctx);
  const ShootResult shot = solve_p0(n, solve_ctx);
  return build_trajectory(n, shot.p0, solve_ctx);
}

Real p0_limit(int digits, int guard, int planner_margin) {
  const Budget budget = plan_budget(digits, guard, planner_margin);
  const PrecCtx ctx(std::max(digits, PrecCtx::kMinDigits), guard);
  return solve_p0(budget.n, ctx).p0;
}

nlohmann::json shoot_result_to_json(const ShootResult& r, int places) {
  return {{"n", r.n},
          {"digits", r.digits},
          {"p0", real_to_decimal(r.p0, places)},
          {"residual", real_to_decimal(r.residual, places)},
          {"iterations", r.iterations}};
}

}  // namespace shallit
