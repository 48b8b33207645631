#pragma once

// Shooting on the half-trajectory midpoint condition.
//
// For n = 2k+1 the orbit from (t, 0) must reach p_k = 1; for n = 2k it must
// reach p_k = u_k. The residual is strictly increasing in t, so bisection on
// [1, golden ratio] finds the unique initial coordinate.

#include "json.hpp"
#include "shallit/dynamics.hpp"
#include "shallit/numerics.hpp"

namespace shallit {

struct ResidualValue {
  Real value;
  /// The forward orbit hit p <= 0 before the midpoint; `value` is then a
  /// synthetic -1 and t lies below the root.
  bool crashed = false;
  int crash_step = -1;
};

ResidualValue residual(int n, const Real& t, const PrecCtx& ctx);

struct ShootResult {
  int n = 0;
  Real p0;
  Real residual;
  int iterations = 0;
  Real bracket_lo;
  Real bracket_hi;
  /// Target digits of the solving context; the final bracket is narrower than 10^-(digits+2).
  int digits = 0;
};

ShootResult solve_p0(int n, const PrecCtx& ctx, bool refine = false);

/// Context used to solve a full trajectory: the forward half amplifies p0 error
/// by rho^(n/2), so the target digits are widened by that many.
PrecCtx conditioned_context(int n, const PrecCtx& ctx);

/// solve_p0 under conditioned_context, then build_trajectory.
Trajectory solve_trajectory(int n, const PrecCtx& ctx);

/// p_{0,n} with n chosen by the planner so that it approximates the limit
/// intercept to `digits` decimals. The result is a lower bound.
Real p0_limit(int digits, int guard = PrecCtx::kDefaultGuard, int planner_margin = 4);

nlohmann::json shoot_result_to_json(const ShootResult& r, int places);

}  // namespace shallit
