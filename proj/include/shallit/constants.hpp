#pragma once

// Minima A_n, the constants C_n = 3n - A_n under four equivalent formulas,
// and the limit constant C.

#include <vector>

#include "json.hpp"
#include "shallit/budget.hpp"
#include "shallit/dynamics.hpp"
#include "shallit/numerics.hpp"

namespace shallit {

/// Sum over j = 0..n of (p_j + u_j + p_j u_j): the minimum of f_n.
Real a_n(const Trajectory& traj);
/// 3n - A_n.
Real c_n_direct(const Trajectory& traj);
/// 2 sum_{j<k} (3 - 2 p_j - p_j u_j) + p_k^2, k = floor(n/2).
Real c_n_traj(const Trajectory& traj);
/// 2 sum_{j=1..k} (lambda_{j-1} - 3 lambda_j) / (1 - lambda_j) + p_k^2.
Real c_n_traj_prime(const Trajectory& traj);
/// 2 sum_{j=1..k} lambda_j (lambda_{j-1} - 2 lambda_j) / u_j + 1 - (p_k - 1)^2.
Real c_n_quad(const Trajectory& traj);
/// The summands of c_n_quad, j = 1..k.
std::vector<Real> c_n_quad_terms(const Trajectory& traj);

struct ConstantsReport {
  int n = 0;
  Real a_n;
  Real c_n_direct;
  Real c_n_traj;
  Real c_n_traj_prime;
  Real c_n_quad;
  int digits = 0;

  /// Largest pairwise difference among the four C_n values.
  Real max_disagreement() const;
};

ConstantsReport constants_report(const Trajectory& traj, int digits);
/// Solves the trajectory for n under `ctx` and reports.
ConstantsReport compute_constants(int n, const PrecCtx& ctx);

/// Minimum limit-trajectory length for s_partial(N) at `target_digits`.
int s_partial_min_length(int N, int target_digits);

/// S_N = sum_{j=0..N} (3 - 2 p_j - p_j u_j) with the limit coordinates taken
/// from a long solved trajectory. Throws PrecisionError if the trajectory is
/// shorter than s_partial_min_length(N, target_digits).
Real s_partial(const Trajectory& limit, int N, int target_digits);

/// Terms j = 1..terms of the cubic series, iterating the map from (p0, 0).
/// Throws PrecisionError (naming the step) if the orbit leaves p > 0.
std::vector<Real> cubic_series_terms(const Real& p0_star, int terms, const PrecCtx& ctx);

/// C = p0* + sum_j lambda_j^2 (lambda_{j+1} - 2 lambda_j + lambda_j lambda_{j+1}) / (u_j u_{j+1}).
Real c_cubic_series(const Real& p0_star, int terms, const PrecCtx& ctx);

struct LimitReport {
  Real C;
  Real p0_star;
  /// S_N and the 2 S_N + 1 cross-check (absent when not requested).
  bool has_s = false;
  Real S;
  int s_terms = 0;
  int s_trajectory_n = 0;
  int terms_used = 0;
  int n_used = 0;
  int digits = 0;
  /// Series tail estimate plus the rho^-n error of the intercept.
  Real error_bound;
};

/// C via the cubic series with the planner's term count, seeded by an
/// intercept solved tightly enough that the orbit's late drift stays below
/// the target; optionally S as a cross-check.
LimitReport compute_limits(int digits, bool with_s = true, int guard = PrecCtx::kDefaultGuard);

nlohmann::json constants_report_to_json(const ConstantsReport& r, int places);
nlohmann::json limit_report_to_json(const LimitReport& r, int places);
nlohmann::json budget_to_json(const Budget& b);

}  // namespace shallit
