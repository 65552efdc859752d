#include <doctest.h>

#include <cmath>

#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/hypotheses.hpp"

using namespace vpi;

TEST_SUITE("hypotheses") {
  TEST_CASE("Schwarzschild horizon is minimal and the residual shrinks under refinement") {
    const auto u = ConformalFactor::schwarzschild(3, 2.0);
    const auto horizon = DomainSpec::ball(3, 1.0);
    double previous = INFINITY;
    for (double h : {1.0 / 6.0, 1.0 / 12.0, 1.0 / 24.0, 1.0 / 48.0}) {
      const double sup = minimality_residual(u, horizon, h).sup_norm();
      CHECK(sup <= 5.0 * h);
      CHECK(sup < previous);
      previous = sup;
    }
    // Radial factors in higher dimensions use the exact radial data.
    for (int n : {4, 5, 7}) {
      const double m = 3.0;
      const auto un = ConformalFactor::schwarzschild(n, m);
      CHECK(minimality_residual(un, DomainSpec::ball(n, horizon_radius(n, m)), 0.05).sup_norm() < 1e-12);
    }
  }

  TEST_CASE("flat balls and spheres outside the horizon are not minimal") {
    const auto flat = ConformalFactor::unit(3);
    CHECK(minimality_residual(flat, DomainSpec::ball(3, 1.0), 1.0 / 24.0).sup_norm() == doctest::Approx(0.5).epsilon(0.01));
    const auto u = ConformalFactor::schwarzschild(3, 2.0);
    CHECK(minimality_residual(u, DomainSpec::ball(3, 2.0), 1.0 / 24.0).sup_norm() > 0.1);
  }

  TEST_CASE("u >= 1 holds for positive charges and fails for u = 1 - 0.1 / r") {
    const auto domain = DomainSpec::ball(3, 1.0);
    const auto good = ConformalFactor::multipole(3, {{{0.2, 0, 0}, 0.3}});
    CHECK(check_u_ge_one(good, domain, 0.1).ok);
    const auto bad = ConformalFactor::sampled([](const Vec3& x) { return 1.0 - 0.1 / norm(x); }, -4.0, 4.0, 0.125);
    const auto c = check_u_ge_one(bad, domain, 0.1);
    CHECK_FALSE(c.ok);
    CHECK(c.worst < 1.0);
    CHECK(c.violations > 0);
  }

  TEST_CASE("superharmonicity") {
    const auto domain = DomainSpec::ball(3, 1.0);
    CHECK(check_superharmonic(ConformalFactor::schwarzschild(3, 2.0), domain, 1.0 / 12.0).ok);
    CHECK(check_superharmonic(ConformalFactor::multipole(3, {{{0.3, 0, 0}, 0.5}, {{-0.3, 0, 0}, 0.5}}), domain, 1.0 / 12.0).ok);
    // A superharmonic shell profile sampled on a lattice passes despite its kink.
    const auto shell = ConformalFactor::sampled(
        [](const Vec3& x) {
          const double r = norm(x);
          return 1.0 + 0.5 / r + 0.25 * std::min(1.0, 2.0 / r);
        },
        -4.0, 4.0, 1.0 / 16.0);
    CHECK(check_superharmonic(shell, DomainSpec::ball(3, 0.4), 1.0 / 60.0).ok);
    // 1 + 0.05 |x|^2 has Laplacian 0.3 > 0 (and a kink where the lattice hands over to the far field).
    const auto sub = ConformalFactor::sampled([](const Vec3& x) { return 1.0 + 0.05 * dot(x, x); }, -4.0, 4.0, 0.125);
    const auto c = check_superharmonic(sub, domain, 1.0 / 12.0);
    CHECK_FALSE(c.ok);
    CHECK(c.worst <= -0.3 + 1e-6);
  }

  TEST_CASE("mean convexity") {
    const auto ball = mean_convex(DomainSpec::ball(3, 2.0), 0.1);
    CHECK(ball.ok);
    CHECK(ball.min_h0 == doctest::Approx(0.5));
    CHECK(mean_convex(DomainSpec::ellipsoid({2.0, 1.0, 1.0}), 0.1).ok);
    // Torus with tube radius 1 around a circle of radius 1.5: the inner equator has h0 = (1 - 2) / 2 < 0.
    const auto torus = DomainSpec::level_set(
        [](const Vec3& x) {
          const double q = std::hypot(x[0], x[1]) - 1.5;
          return std::sqrt(q * q + x[2] * x[2]) - 1.0;
        },
        {-2.6, -2.6, -1.1}, {2.6, 2.6, 1.1});
    const auto t = mean_convex(torus, 0.05);
    CHECK_FALSE(t.ok);
    CHECK(t.min_h0 == doctest::Approx(-0.5).epsilon(0.05));
  }

  TEST_CASE("hypothesis checks reject inconsistent input") {
    const auto u = ConformalFactor::schwarzschild(4, 1.0);
    CHECK_THROWS_AS(check_u_ge_one(u, DomainSpec::ball(3, 1.0), 0.1), InputError);
    CHECK_THROWS_AS(minimality_residual(ConformalFactor::multipole(4, {{{0.1, 0, 0, 0}, 1.0}}), DomainSpec::ball(4, 1.0), 0.1),
                    InputError);
    CHECK_THROWS_AS(check_superharmonic(ConformalFactor::unit(3), DomainSpec::ball(3, 1.0), 0.0), InputError);
  }
}
