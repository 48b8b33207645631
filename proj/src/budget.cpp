#include "shallit/budget.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shallit/numerics.hpp"

namespace shallit {

Budget plan_budget(int target_digits, int guard, int margin) {
  if (target_digits < 10) {
    throw std::invalid_argument("planner needs at least 10 target digits, got " +
                                std::to_string(target_digits));
  }
  // Steps per decimal digit of contraction toward the fixed point.
  const double steps = target_digits / log10_rho();
  Budget b;
  b.target_digits = target_digits;
  b.n = static_cast<int>(std::ceil(steps)) + margin;
  b.series_terms = static_cast<int>(std::ceil(2.0 * steps / 3.0)) + margin;
  b.working_digits = target_digits + guard;
  return b;
}

}  // namespace shallit
