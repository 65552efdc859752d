#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"

using namespace vpi;

TEST_SUITE("geom_core") {
  TEST_CASE("horizon radius (m/2)^{1/(n-2)}") {
    CHECK(horizon_radius(3, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(horizon_radius(4, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(horizon_radius(5, 16.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(horizon_radius(3, 7.0) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK_THROWS_AS(horizon_radius(3, -1.0), InputError);
    CHECK_THROWS_AS(horizon_radius(2, 1.0), InputError);
  }

  TEST_CASE("Schwarzschild has zero scalar curvature and a minimal horizon") {
    for (int n : {3, 4, 5, 7}) {
      for (double m : {0.5, 1.0, 2.0, 7.0}) {
        const auto u = schwarzschild_factor(n, m);
        const double rh = horizon_radius(n, m);
        std::vector<double> x(n, 0.0), nu(n, 0.0);
        x[0] = 0.6 * rh;
        x[1] = 0.8 * rh;
        nu[0] = 0.6;
        nu[1] = 0.8;
        CHECK(std::abs(scalar_curvature(u, x)) < 1e-12);
        CHECK(std::abs(mean_curvature_conformal(u, x, nu, 1.0 / rh)) < 1e-12);
        // Away from the horizon the sphere is mean convex in g.
        for (auto& c : x) c *= 2.0;
        CHECK(mean_curvature_conformal(u, x, nu, 0.5 / rh) > 0.0);
      }
    }
  }

  TEST_CASE("flat mean curvature is the average of principal curvatures") {
    const auto u = ConformalFactor::unit(3);
    const std::vector<double> x{0.0, 0.0, 2.0}, nu{0.0, 0.0, 1.0};
    CHECK(mean_curvature_conformal(u, x, nu, 0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(mean_curvature_conformal(u, x, std::vector<double>{0.0, 0.0, 2.0}, 0.5), InputError);
  }

  TEST_CASE("multipole factors are harmonic away from the poles") {
    const auto u = ConformalFactor::multipole(3, {{{0.3, 0.0, 0.0}, 0.5}, {{-0.2, 0.4, 0.1}, 0.25}});
    const std::vector<double> x{1.5, -0.7, 0.9};
    CHECK(std::abs(scalar_curvature(u, x)) < 1e-12);
  }

  TEST_CASE("volumetric and Penrose right-hand sides") {
    for (int n = 3; n <= 8; ++n) {
      const Dimension d(n);
      for (double R : {0.5, 1.0, 3.0}) {
        CHECK(rhs_volumetric(d, d.beta() * std::pow(R, n)) == doctest::Approx(std::pow(R, n - 2)).epsilon(1e-13));
      }
    }
    CHECK_THROWS_AS(rhs_volumetric(Dimension(3), 0.0), InputError);
    CHECK_THROWS_AS(rhs_rpi(Dimension(3), -1.0), InputError);
  }

  TEST_CASE("Schwarzschild table: rhs_rpi = m and rhs_vol = m / 2") {
    for (int n : {3, 4, 5, 7}) {
      for (double m : {0.5, 1.0, 2.0, 7.0}) {
        const auto d = schwarzschild_data(n, m);
        CHECK(d.horizon_radius == doctest::Approx(horizon_radius(n, m)).epsilon(1e-15));
        CHECK(std::abs(d.rhs_rpi - m) <= 1e-12 * m);
        CHECK(std::abs(d.rhs_vol - 0.5 * m) <= 1e-12 * m);
        CHECK(d.rhs_vol == doctest::Approx(rhs_volumetric(Dimension(n), d.horizon_volume)).epsilon(1e-14));
        CHECK(d.rhs_rpi == doctest::Approx(rhs_rpi(Dimension(n), d.horizon_area)).epsilon(1e-14));
      }
    }
    // n = 3: the horizon area is 16 pi m^2.
    CHECK(schwarzschild_data(3, 2.0).horizon_area == doctest::Approx(64.0 * std::numbers::pi));
  }
}
