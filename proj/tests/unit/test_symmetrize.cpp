#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vpi/capacity.hpp"
#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/measure.hpp"
#include "vpi/symmetrize.hpp"

using namespace vpi;

namespace {

GridField gaussian(double h, double s2 = 0.08, Vec3 c = {0.1, -0.05, 0.0}) {
  const auto mesh = Mesh::uniform({-1.25, -1.25, -1.25}, {1.25, 1.25, 1.25}, h);
  return GridField::sample(mesh, [=](const Vec3& x) {
    const Vec3 d = x - c;
    return std::exp(-dot(d, d) / s2);
  });
}

}  // namespace

TEST_SUITE("symmetrize") {
  TEST_CASE("canonical_sum is exact and order independent") {
    CHECK(canonical_sum({1e16, 1.0, -1e16}) == 1.0);
    CHECK(canonical_sum({1e100, 1.0, -1e100, 1e-300}) == 1.0);
    CHECK(canonical_sum({0.1, 0.2, 0.3}) == 0.6);
    CHECK(canonical_sum({}) == 0.0);
    std::mt19937_64 rng(7);
    std::vector<double> t;
    for (int i = 0; i < 5000; ++i) t.push_back(std::ldexp(double(rng() >> 11), -int(rng() % 80)) * (i % 3 ? 1 : -1));
    const double s = canonical_sum(t);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(t.begin(), t.end(), rng);
      CHECK(canonical_sum(t) == s);
    }
    // Negative totals: the sum is odd under t -> -t.
    CHECK(canonical_sum({-1.0, -2.0}) == -3.0);
    CHECK(canonical_sum({-1e16, -1.0, 1e16}) == -1.0);
    std::vector<double> neg(t);
    for (double& v : neg) v = -v;
    CHECK(canonical_sum(neg) == -s);
    CHECK(canonical_sum({1e8, -1e8 - 1e-8, 3e-9}) == doctest::Approx(-7e-9).epsilon(1e-6));
    CHECK_THROWS_AS(canonical_sum({1.0, std::nan("")}), InputError);
  }

  TEST_CASE("rearrangement preserves the distribution exactly") {
    const auto f = gaussian(1.0 / 12.0);
    const auto r = rearrange(f);
    CHECK(std::is_sorted(r.values.rbegin(), r.values.rend()));
    for (double e : r.norms.mismatch()) CHECK(e == 0.0);
    CHECK(r.total_measure() == doctest::Approx(2.5 * 2.5 * 2.5).epsilon(1e-12));
    // Measure of a super-level set equals the measure of the cells above it.
    for (double K : {0.9, 0.5, 0.1, 0.01}) {
      double m = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= K) m += f.mesh().measure(i);
      }
      CHECK(r.measure_at_least(K) == doctest::Approx(m).epsilon(1e-14));
    }
    CHECK(r.profile.non_increasing());
    CHECK(r.value_at(0.0) == r.values.front());
    CHECK(r.level_map.size() >= 2);
    for (std::size_t k = 1; k < r.level_map.size(); ++k) {
      CHECK(r.level_map[k].level <= r.level_map[k - 1].level);
      CHECK(r.level_map[k].volume >= r.level_map[k - 1].volume);
    }
  }

  TEST_CASE("a radial decreasing field is its own rearrangement") {
    const auto f = gaussian(1.0 / 24.0, 0.08, {0.0, 0.0, 0.0});
    const auto r = rearrange(f);
    for (double rad : {0.1, 0.3, 0.5}) CHECK(r.profile(rad) == doctest::Approx(std::exp(-rad * rad / 0.08)).epsilon(0.02));
  }

  TEST_CASE("Polya-Szego: rearrangement does not raise the energy") {
    // Off-centre sum of two bumps: strictly lower energy after rearrangement.
    const auto mesh = Mesh::uniform({-1.25, -1.25, -1.25}, {1.25, 1.25, 1.25}, 1.0 / 16.0);
    const auto f = GridField::sample(mesh, [](const Vec3& x) {
      const Vec3 a = x - Vec3{0.35, 0, 0}, b = x + Vec3{0.35, 0, 0};
      return std::exp(-dot(a, a) / 0.04) + std::exp(-dot(b, b) / 0.04);
    });
    const auto rep = polya_szego_check(f);
    CHECK(rep.energy_rearranged < rep.energy);
    for (double e : rep.lp_errors) CHECK(e == 0.0);
  }

  TEST_CASE("clipping limits the rearranged range") {
    const auto f = gaussian(1.0 / 12.0);
    const auto r = rearrange(f, std::pair{0.2, 0.6});
    CHECK(r.values.front() <= 0.6);
    CHECK(r.values.back() >= 0.2);
  }

  TEST_CASE("extension into Omega and restriction to r >= R") {
    GridCapacityParams p;
    p.h = 1.0 / 8.0;
    p.r_out = 6.0;
    p.estimate_error = false;
    const auto cap = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p);
    const auto& phi = std::get<GridField>(cap.potential);
    const auto ext = extend_into_omega(phi);
    for (std::size_t i = 0; i < ext.size(); ++i) {
      if (phi.mesh().tag(i) == CellTag::interior) CHECK(ext[i] == 1.0);
    }
    const auto r = rearrange(ext, std::pair{0.0, 1.0});
    const double V = phi.mesh().interior_measure();
    const auto star = restrict_star(r, V);
    CHECK(star.r_min() == doctest::Approx(std::cbrt(V / ball_volume(3))).epsilon(1e-12));
    CHECK(star(star.r_min()) == 1.0);
    CHECK(star.non_increasing());
    CHECK_THROWS(restrict_star(r, 2.0 * r.total_measure()));

    GridField bad = phi;
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (bad.mesh().tag(i) == CellTag::exterior) {
        bad[i] = 1.5;
        break;
      }
    }
    CHECK_THROWS_AS(extend_into_omega(bad), InputError);
  }
}
