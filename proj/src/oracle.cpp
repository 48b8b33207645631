#include "shallit/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace shallit::oracle {

namespace {

void require_positive(const std::vector<double>& v, std::size_t from, const char* what) {
  for (std::size_t i = from; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw OracleDomainError(std::string(what) + " component " + std::to_string(i) +
                              " is not positive");
    }
  }
}

void validate(const UVector& uv) {
  if (uv.u.size() < 2) throw OracleDomainError("u-vector needs n >= 1");
  if (uv.u[0] != 0.0) throw OracleDomainError("u_0 must be 0");
  require_positive(uv.u, 1, "u");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Golden-section search for the minimum of g_n along coordinate j.
void coordinate_golden(UVector& uv, int j, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g_at = [&](double s) {
    const double saved = uv.u[static_cast<std::size_t>(j)];
    uv.u[static_cast<std::size_t>(j)] = s;
    const double v = g_n(uv);
    uv.u[static_cast<std::size_t>(j)] = saved;
    return v;
  };
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g_at(c), gd = g_at(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g_at(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g_at(d);
    }
  }
  uv.u[static_cast<std::size_t>(j)] = (a + b) / 2.0;
}

}  // namespace

double f_n(const XVector& xv) {
  if (xv.x.empty()) throw OracleDomainError("x-vector needs n >= 1");
  require_positive(xv.x, 0, "x");
  const int n = xv.n();
  double total = 0.0;
  for (double x : xv.x) total += x;
  // Row i: prod_{k=i..j} 1/x_k for j = i..n, accumulated left to right.
  for (int i = 0; i < n; ++i) {
    double prod = 1.0;
    for (int j = i; j < n; ++j) {
      prod /= xv.x[static_cast<std::size_t>(j)];
      total += prod;
    }
  }
  return total;
}

double lagrangian(double t, double s) { return s + (1.0 + t) / s; }

double g_n(const UVector& uv) {
  validate(uv);
  double total = 0.0;
  for (std::size_t j = 1; j < uv.u.size(); ++j) total += lagrangian(uv.u[j - 1], uv.u[j]);
  return total;
}

UVector x_to_u(const XVector& xv) {
  if (xv.x.empty()) throw OracleDomainError("x-vector needs n >= 1");
  require_positive(xv.x, 0, "x");
  UVector uv;
  uv.u.assign(xv.x.size() + 1, 0.0);
  for (std::size_t j = 1; j <= xv.x.size(); ++j) uv.u[j] = (1.0 + uv.u[j - 1]) / xv.x[j - 1];
  return uv;
}

XVector u_to_x(const UVector& uv) {
  validate(uv);
  XVector xv;
  xv.x.resize(uv.u.size() - 1);
  for (std::size_t j = 1; j < uv.u.size(); ++j) xv.x[j - 1] = (1.0 + uv.u[j - 1]) / uv.u[j];
  return xv;
}

std::vector<double> critical_residuals(const UVector& uv) {
  validate(uv);
  const std::size_t n = uv.u.size() - 1;
  std::vector<double> r(n);
  for (std::size_t j = 1; j <= n; ++j) {
    double g = 1.0 - (1.0 + uv.u[j - 1]) / (uv.u[j] * uv.u[j]);
    if (j < n) g += 1.0 / uv.u[j + 1];
    r[j - 1] = g;
  }
  return r;
}

MinimizeResult minimize_direct(int n, double tol) {
  if (n < 1 || n > 12) throw OracleDomainError("direct minimization supports 1 <= n <= 12");
  const double box_hi = 3.0 * n - 1.0;
  const double box_lo = 1.0 / box_hi;

  UVector uv;
  uv.u.assign(static_cast<std::size_t>(n) + 1, 1.0);
  uv.u[0] = 0.0;

  MinimizeResult out;
  std::vector<double> grad = critical_residuals(uv);
  double value = g_n(uv);
  constexpr int kNewtonCap = 100;
  bool stalled = false;

  for (int it = 0; it < kNewtonCap && max_abs(grad) >= tol; ++it) {
    ++out.iterations;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd g(n);
    for (int j = 1; j <= n; ++j) {
      const auto uj = uv.u[static_cast<std::size_t>(j)];
      h(j - 1, j - 1) = 2.0 * (1.0 + uv.u[static_cast<std::size_t>(j) - 1]) / (uj * uj * uj);
      if (j < n) {
        const double next = uv.u[static_cast<std::size_t>(j) + 1];
        h(j - 1, j) = h(j, j - 1) = -1.0 / (next * next);
      }
      g(j - 1) = grad[static_cast<std::size_t>(j) - 1];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() != Eigen::Success) {
      stalled = true;
      break;
    }
    const Eigen::VectorXd step = llt.solve(-g);

    // Backtrack until the step stays in the box and makes progress.
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, alpha /= 2.0) {
      UVector trial = uv;
      bool inside = true;
      for (int j = 1; j <= n && inside; ++j) {
        const double v = uv.u[static_cast<std::size_t>(j)] + alpha * step(j - 1);
        inside = v >= box_lo && v <= box_hi;
        trial.u[static_cast<std::size_t>(j)] = v;
      }
      if (!inside) continue;
      // Near the minimum g changes below roundoff; a smaller gradient also counts.
      const double tv = g_n(trial);
      if (tv < value || max_abs(critical_residuals(trial)) < max_abs(grad)) {
        uv = std::move(trial);
        value = tv;
        accepted = true;
        break;
      }
    }
    grad = critical_residuals(uv);
    if (!accepted) {
      stalled = max_abs(grad) >= tol;
      break;
    }
  }

  if (stalled) {
    constexpr int kSweepCap = 2000;
    for (int sweep = 0; sweep < kSweepCap && max_abs(grad) >= tol; ++sweep) {
      ++out.iterations;
      for (int j = 1; j <= n; ++j) coordinate_golden(uv, j, box_lo, box_hi);
      grad = critical_residuals(uv);
    }
  }

  out.u = uv;
  out.x = u_to_x(uv);
  out.value = g_n(uv);
  out.max_residual = max_abs(grad);
  out.converged = out.max_residual < tol;
  return out;
}

}  // namespace shallit::oracle
