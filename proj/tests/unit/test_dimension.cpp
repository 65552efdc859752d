#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"

using namespace vpi;

TEST_SUITE("dimension") {
  TEST_CASE("sphere and ball constants match closed forms") {
    const double pi = std::numbers::pi;
    CHECK(sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
    CHECK(ball_volume(4) == doctest::Approx(pi * pi / 2.0).epsilon(1e-15));
    CHECK(ball_volume(5) == doctest::Approx(8.0 * pi * pi / 15.0).epsilon(1e-15));
  }

  TEST_CASE("omega_{n-1} = n beta_n") {
    for (int n = 3; n <= 12; ++n) {
      const Dimension d(n);
      CHECK(d.n() == n);
      CHECK(d.omega() == doctest::Approx(n * d.beta()).epsilon(1e-14));
    }
  }

  TEST_CASE("dimensions below 3 are rejected") {
    CHECK_THROWS_AS(Dimension(2), InputError);
    CHECK_THROWS_WITH(Dimension(1), doctest::Contains("dimension must be >= 3"));
    CHECK_THROWS_AS(sphere_area(2), InputError);
  }
}
