#include <cmath>

#include "doctest.h"
#include "shallit/analysis.hpp"
#include "shallit/solver.hpp"

using namespace shallit;

namespace {

const double kInvRho = 1.0 / (2.0 + std::sqrt(3.0));

bool check_passes(const VerificationReport& r, const std::string& name) {
  bool seen = false;
  for (const auto& c : r.checks) {
    if (c.name != name) continue;
    seen = true;
    if (!c.pass) return false;
  }
  return seen;
}

}  // namespace

TEST_CASE("rate quantity names") {
  for (auto q : {RateQuantity::CGap, RateQuantity::P0Gap, RateQuantity::LambdaStar,
                 RateQuantity::UMidGap}) {
    CHECK(parse_rate_quantity(rate_quantity_name(q)) == q);
  }
  CHECK_THROWS_AS(parse_rate_quantity("c_gap"), std::invalid_argument);
}

TEST_CASE("C gap rate") {
  const RateReport r = fit_rate(RateQuantity::CGap, 20, 100, PrecCtx(100));
  CHECK(r.reference_digits == 150);
  CHECK(r.samples.size() == 81);
  CHECK(r.band_lo.sign() > 0);
  CHECK((r.band_hi / r.band_lo).to_double() < 10.0);
  CHECK(std::abs(r.ratio_estimate.to_double() - kInvRho) < 1e-3);
  for (const auto& ratio : r.successive_ratios) CHECK(std::abs(ratio.to_double() - kInvRho) < 1e-3);
  CHECK(rate_report_to_csv(r).rfind("n,gap,gap_times_rho_pow\n20,", 0) == 0);
}

TEST_CASE("intercept gap rate") {
  const RateReport r = fit_rate(RateQuantity::P0Gap, 20, 60, PrecCtx(60));
  CHECK((r.band_hi / r.band_lo).to_double() < 10.0);
  CHECK(std::abs(r.ratio_estimate.to_double() - kInvRho) < 1e-3);
}

TEST_CASE("limit deviations") {
  const RateReport r = fit_rate(RateQuantity::LambdaStar, 5, 40, PrecCtx(40));
  CHECK(r.band_lo.sign() > 0);
  CHECK((r.band_hi / r.band_lo).to_double() < 2.0);
}

TEST_CASE("midpoint gap alternates but stays bounded") {
  const RateReport r = fit_rate(RateQuantity::UMidGap, 20, 100, PrecCtx(60));
  CHECK(r.band_lo.sign() > 0);
  CHECK((r.band_hi / r.band_lo).to_double() < 10.0);
  CHECK(std::abs(r.ratio_estimate.to_double() - std::sqrt(kInvRho)) < 1e-3);
}

TEST_CASE("unresolvable gaps are reported") {
  try {
    fit_rate(RateQuantity::CGap, 20, 100, PrecCtx(30));
    FAIL("expected a precision error");
  } catch (const PrecisionError& e) {
    CHECK(std::string(e.what()).find("C_gap at index") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_rate(RateQuantity::CGap, 5, 4, PrecCtx(30)), std::invalid_argument);
}

TEST_CASE("stable-curve slope") {
  // 160 terms need about 92 + guard correct digits of the intercept.
  const PrecCtx ctx(120);
  const Real p0 = p0_limit(120);
  const SlopeResult r = slope_sigma(p0, 80, ctx);
  CHECK(r.terms == 80);
  CHECK(r.sigma < -1 / p0);
  // Independent estimate: shoot (p0* + e dp, e du) onto the stable curve and
  // read the direction off the difference quotient, giving -1.303246.
  CHECK(std::abs(r.sigma.to_double() + 1.303246) < 1e-5);
  const SlopeResult doubled = slope_sigma(p0, 160, ctx);
  CHECK(abs(doubled.sigma - r.sigma) <= r.residual + doubled.residual);
}

TEST_CASE("convexity Wronskian") {
  const PrecCtx ctx(30);
  const Real t = real_from_decimal("1.2", ctx);
  const WronskianReport w0 = convexity_wronskian(0, {t}, ctx);
  CHECK(w0.samples[0].wronskian.is_zero());
  CHECK(w0.holds());

  const WronskianReport w1 = convexity_wronskian(1, {t}, ctx);
  CHECK(abs(w1.samples[0].wronskian - 6 / (t * t)) < pow10(-30, ctx.bits()));

  const Real phi = golden_ratio(ctx);
  std::vector<Real> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(1 + (phi - 1) * i / 21);
  for (int n = 1; n <= 30; ++n) {
    const WronskianReport w = convexity_wronskian(n, grid, ctx);
    CHECK(w.holds());
    CHECK(w.evaluated() >= 1);
  }
  // Long orbits from t = 1.2 leave the positive quadrant and are skipped.
  const WronskianReport skipped = convexity_wronskian(30, {t}, ctx);
  CHECK(skipped.samples[0].skipped);
  CHECK(skipped.evaluated() == 0);

  CHECK_THROWS_AS(convexity_wronskian(3, {phi + 1}, ctx), std::invalid_argument);
  CHECK_THROWS_AS(convexity_wronskian(3, {Real(0, ctx)}, ctx), std::invalid_argument);
}

TEST_CASE("invariant suite") {
  const PrecCtx ctx(60);
  std::vector<int> ns;
  for (int n = 1; n <= 20; ++n) ns.push_back(n);
  const VerificationReport r = run_invariant_suite(ns, ctx);
  CHECK(r.all_pass());
  for (const char* name : {"conservation", "seam", "lambda_recurrence", "midpoint", "monotone_in_n",
                           "cn_gap_lower_bound", "oracle_A_n", "exp_bound_pu"}) {
    CHECK_MESSAGE(check_passes(r, name), name);
  }
  const auto j = verification_report_to_json(r);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"][0].contains("paper_ref"));
  CHECK(verification_report_to_text(r).find("FAIL") == std::string::npos);

  CHECK(run_invariant_suite({}, ctx).checks.empty());
}

TEST_CASE("a corrupted intercept is caught") {
  const PrecCtx ctx(60);
  const int n = 40;
  const PrecCtx solve_ctx = conditioned_context(n, ctx);
  const Real p0 = solve_p0(n, solve_ctx).p0 + pow10(-60, solve_ctx.bits());
  const Trajectory bad = build_trajectory(n, p0, solve_ctx);
  const auto checks = check_trajectory(bad, default_tolerance(ctx));
  for (const auto& c : checks) {
    if (c.name == "seam" || c.name == "conservation" || c.name == "midpoint") {
      CHECK_MESSAGE(!c.pass, c.name);
      CHECK(c.residual > c.tolerance);
    }
  }
}
