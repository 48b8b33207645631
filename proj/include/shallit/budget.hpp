#pragma once

namespace shallit {

/// Work plan for computing the limit constants to `target_digits` decimals.
struct Budget {
  int target_digits = 0;
  /// Trajectory length whose p0 approximates the limit intercept.
  int n = 0;
  /// Number of terms of the cubic series for C.
  int series_terms = 0;
  int working_digits = 0;
};

/// n = ceil(D ln10 / ln rho) + margin, terms = ceil((2/3) D ln10 / ln rho) + margin,
/// working = D + guard. Requires D >= 10.
Budget plan_budget(int target_digits, int guard = 10, int margin = 4);

}  // namespace shallit
