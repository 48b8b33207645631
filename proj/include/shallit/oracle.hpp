#pragma once

// Double-precision ground truth for small n: the original objective f_n, its
// O(n) image g_n under the change of variables, and a direct minimizer.

#include <stdexcept>
#include <vector>

namespace shallit::oracle {

class OracleDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x_1..x_n, all positive.
struct XVector {
  std::vector<double> x;
  int n() const { return static_cast<int>(x.size()); }
};

/// u_0..u_n with u_0 = 0 and the rest positive.
struct UVector {
  std::vector<double> u;
  int n() const { return static_cast<int>(u.size()) - 1; }
};

/// sum x_i + sum_{i<=j} prod_{k=i..j} 1/x_k.
double f_n(const XVector& xv);

/// L(t, s) = s + (1 + t)/s.
double lagrangian(double t, double s);
/// sum_{j=1..n} L(u_{j-1}, u_j).
double g_n(const UVector& uv);

/// u_1 = 1/x_1, u_j = (1 + u_{j-1})/x_j.
UVector x_to_u(const XVector& xv);
/// x_1 = 1/u_1, x_j = (1 + u_{j-1})/u_j.
XVector u_to_x(const UVector& uv);

/// Components of grad g_n at u (j = 1..n).
std::vector<double> critical_residuals(const UVector& uv);

struct MinimizeResult {
  XVector x;
  UVector u;
  double value = 0.0;
  double max_residual = 0.0;
  int iterations = 0;
  /// False when the iteration cap was hit; x/u are then the best iterate.
  bool converged = false;
};

/// Damped Newton on grad g_n = 0 from u = (0, 1, ..., 1), with a
/// coordinate-wise golden-section fallback. Requires 1 <= n <= 12.
MinimizeResult minimize_direct(int n, double tol = 1e-10);

}  // namespace shallit::oracle
