#pragma once

// Convergence-rate fits, lemma-invariant suites, the stable-curve slope and
// the convexity Wronskian.

#include <string>
#include <vector>

#include "json.hpp"
#include "shallit/dynamics.hpp"
#include "shallit/numerics.hpp"

namespace shallit {

enum class RateQuantity { CGap, P0Gap, LambdaStar, UMidGap };

const char* rate_quantity_name(RateQuantity q);
/// Accepts C_gap, p0_gap, lambda_star, u_mid_gap.
RateQuantity parse_rate_quantity(const std::string& name);

struct RateSample {
  /// n, or j for lambda_star.
  int index = 0;
  Real gap;
  /// gap * rho^index (rho^(index/2) for u_mid_gap).
  Real scaled;
};

struct RateReport {
  RateQuantity quantity = RateQuantity::CGap;
  std::vector<RateSample> samples;
  Real band_lo;
  Real band_hi;
  /// gap_{i+1} / gap_i for consecutive samples.
  std::vector<Real> successive_ratios;
  /// sqrt(gap_m / gap_{m-2}) at the end of the range: a per-step rate that
  /// is insensitive to even/odd alternation.
  Real ratio_estimate;
  /// The power of rho the estimate should approach.
  Real expected_ratio;
  int reference_digits = 0;
};

/// Gaps over [lo, hi] at `ctx`, against references computed at 1.5x the
/// digits. Throws PrecisionError naming the first index whose gap is not
/// resolved.
RateReport fit_rate(RateQuantity q, int lo, int hi, const PrecCtx& ctx);

std::string rate_report_to_csv(const RateReport& r);
nlohmann::json rate_report_to_json(const RateReport& r);

struct SlopeResult {
  Real sigma;
  int iterations = 0;
  int terms = 0;
  /// max(last correction, change against half the terms).
  Real residual;
};

/// Slope of the stable curve at (p0*, 0). p0_star needs about
/// terms*log10(rho) + guard correct digits.
SlopeResult slope_sigma(const Real& p0_star, int terms, const PrecCtx& ctx);

nlohmann::json slope_result_to_json(const SlopeResult& r);

struct WronskianSample {
  Real t;
  Real wronskian;
  bool skipped = false;
  std::string note;
};

struct WronskianReport {
  int n = 0;
  std::vector<WronskianSample> samples;
  int evaluated() const;
  /// Every evaluated sample has W > 0 (n >= 1) or W == 0 (n == 0).
  bool holds() const;
};

/// Propagates (t, 0) with first and second t-derivatives for n steps and
/// evaluates ddU*dP - dU*ddP. Samples whose orbit reaches p <= 0 are skipped.
WronskianReport convexity_wronskian(int n, const std::vector<Real>& t_samples, const PrecCtx& ctx);

struct CheckResult {
  std::string name;
  /// The identity or inequality being checked, as a formula.
  std::string paper_ref;
  int n = 0;
  Real residual;
  Real tolerance;
  bool pass = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::size_t failures() const;
};

/// Default invariant tolerance: 10^-(digits - 8).
Real default_tolerance(const PrecCtx& ctx);

/// Identities and inequalities of a single solved trajectory.
std::vector<CheckResult> check_trajectory(const Trajectory& traj, const Real& tol);

/// Trajectory checks, C_n formula agreement, cross-n monotonicity and, for
/// n <= 8, the direct-minimization oracle. tol <= 0 selects the default.
VerificationReport run_invariant_suite(const std::vector<int>& n_list, const PrecCtx& ctx,
                                       const Real& tol = Real());

std::string verification_report_to_text(const VerificationReport& r);
nlohmann::json verification_report_to_json(const VerificationReport& r);

}  // namespace shallit
