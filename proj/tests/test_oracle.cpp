#include <cmath>
#include <random>

#include "doctest.h"
#include "shallit/constants.hpp"
#include "shallit/oracle.hpp"

using namespace shallit::oracle;

TEST_CASE("f_n small cases") {
  CHECK(f_n(XVector{{1.0}}) == 2.0);
  CHECK(f_n(XVector{{1.0, 1.0}}) == 5.0);
  for (int n = 1; n <= 12; ++n) {
    const XVector ones{std::vector<double>(static_cast<std::size_t>(n), 1.0)};
    CHECK(f_n(ones) == doctest::Approx(n + n * (n + 1) / 2.0));
  }
  CHECK_THROWS_AS(f_n(XVector{{1.0, 0.0}}), OracleDomainError);
  CHECK_THROWS_AS(f_n(XVector{}), OracleDomainError);
}

TEST_CASE("g_n small cases") {
  CHECK(g_n(UVector{{0.0, 1.0}}) == 2.0);
  CHECK(g_n(UVector{{0.0, 2.0}}) == 2.5);
  for (int n = 1; n <= 12; ++n) {
    UVector u{std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0)};
    u.u[0] = 0.0;
    CHECK(g_n(u) == doctest::Approx(3.0 * n - 1));
  }
  CHECK_THROWS_AS(g_n(UVector{{0.0, 0.0}}), OracleDomainError);
  CHECK_THROWS_AS(g_n(UVector{{1.0, 1.0}}), OracleDomainError);
}

TEST_CASE("change of variables") {
  const UVector u = x_to_u(XVector{{1.0}});
  CHECK(u.u == std::vector<double>{0.0, 1.0});
  CHECK(u_to_x(u).x == std::vector<double>{1.0});

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 1000; ++trial) {
      XVector x;
      for (int i = 0; i < n; ++i) x.x.push_back(dist(rng));
      const XVector back = u_to_x(x_to_u(x));
      for (std::size_t i = 0; i < x.x.size(); ++i) {
        CHECK(std::abs(back.x[i] - x.x[i]) <= 1e-12 * x.x[i]);
      }
      const double f = f_n(x);
      CHECK(std::abs(f - g_n(x_to_u(x))) < 1e-12 * f);
    }
  }
}

TEST_CASE("direct minimization") {
  const MinimizeResult m1 = minimize_direct(1);
  CHECK(m1.converged);
  CHECK(m1.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m1.x.x[0] == doctest::Approx(1.0).epsilon(1e-10));

  const MinimizeResult m2 = minimize_direct(2);
  CHECK(std::abs(m2.value - 4.729031537980930) < 1e-8);

  const shallit::PrecCtx ctx(30);
  for (int n = 1; n <= 12; ++n) {
    const MinimizeResult m = minimize_direct(n);
    CHECK(m.converged);
    CHECK(m.max_residual < 1e-10);
    const double box = 3.0 * n - 1.0;
    for (std::size_t j = 1; j < m.u.u.size(); ++j) {
      CHECK(m.u.u[j] >= 1.0 / box);
      CHECK(m.u.u[j] <= box);
    }
    const double a_n = shallit::compute_constants(n, ctx).a_n.to_double();
    CHECK(std::abs(m.value - a_n) < 1e-8);
  }
  CHECK_THROWS_AS(minimize_direct(0), OracleDomainError);
  CHECK_THROWS_AS(minimize_direct(13), OracleDomainError);
}

TEST_CASE("critical residuals vanish only at the minimizer") {
  UVector ones{{0.0, 1.0, 1.0, 1.0}};
  const auto r = critical_residuals(ones);
  // Interior components: 1 - 2 + 1 = 0; the first is 1 - 1 + 1 = 1, the last is 1 - 2 = -1.
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == -1.0);
}
