#include <doctest.h>

#include <cmath>

#include "vpi/capacity.hpp"
#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"

using namespace vpi;

namespace {

GridCapacityParams coarse(double h = 1.0 / 12.0, double r_out = 16.0) {
  GridCapacityParams p;
  p.h = h;
  p.r_out = r_out;
  p.estimate_error = false;
  return p;
}

}  // namespace

TEST_SUITE("capacity") {
  TEST_CASE("flat capacity of a sphere is R^{n-2}") {
    CHECK(flat_capacity_sphere(3, 2.0) == 2.0);
    CHECK(flat_capacity_sphere(5, 2.0) == 8.0);
    CHECK_THROWS_AS(flat_capacity_sphere(2, 1.0), InputError);
    CHECK_THROWS_AS(flat_capacity_sphere(3, 0.0), InputError);
  }

  TEST_CASE("radial capacity: Schwarzschild horizon capacity equals the mass") {
    for (int n : {3, 4, 5, 7}) {
      for (double m : {0.5, 1.0, 2.0, 7.0}) {
        const auto u = ConformalFactor::schwarzschild(n, m);
        const auto c = radial_weighted_capacity(u, horizon_radius(n, m));
        CHECK(std::abs(c.value - m) <= 1e-6 * m);
        CHECK(c.error_estimate < 1e-6 * m);
      }
    }
  }

  TEST_CASE("radial capacity: flat factor and spheres outside the horizon") {
    const auto flat = ConformalFactor::unit(4);
    CHECK(radial_weighted_capacity(flat, 1.7).value == doctest::Approx(1.7 * 1.7).epsilon(1e-10));
    // For u = 1 + c s (s = r^{2-n}) the capacity of |x| = r is 1 / (s / (1 + c s)) = r^{n-2} + c.
    const double m = 2.0;
    const auto u = ConformalFactor::schwarzschild(3, m);
    const auto c = radial_weighted_capacity(u, 2.0);
    CHECK(c.value == doctest::Approx(2.0 + 0.5 * m).epsilon(1e-10));
    const auto& prof = std::get<RadialProfile>(c.potential);
    CHECK(prof(2.0) == doctest::Approx(1.0));
    CHECK(prof.non_increasing());
    CHECK_THROWS_AS(radial_weighted_capacity(ConformalFactor::multipole(3, {{{0.5, 0, 0}, 1.0}}), 1.0), InputError);
  }

  TEST_CASE("grid capacity of the unit ball") {
    const auto c = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), coarse());
    CHECK(c.value == doctest::Approx(1.0).epsilon(0.03));
    CHECK(c.stats.converged);
    CHECK(c.stats.residual <= 1e-10);
  }

  TEST_CASE("grid capacity: multigrid and Jacobi preconditioners agree") {
    auto p = coarse(1.0 / 8.0, 8.0);
    const auto mg = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p);
    p.preconditioner = Preconditioner::jacobi;
    const auto jac = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p);
    CHECK(mg.value == doctest::Approx(jac.value).epsilon(1e-8));
    CHECK(mg.stats.iterations < jac.stats.iterations);
  }

  TEST_CASE("grid capacity: symmetry reduction does not change the answer") {
    auto p = coarse(1.0 / 8.0, 8.0);
    const auto reduced = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p);
    p.use_symmetry = false;
    const auto full = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p);
    CHECK(reduced.value == doctest::Approx(full.value).epsilon(1e-8));
  }

  TEST_CASE("weighted grid capacity of the Schwarzschild horizon") {
    const double m = 2.0;
    const auto u = ConformalFactor::schwarzschild(3, m);
    const auto c = grid_capacity(DomainSpec::ball(3, 1.0), Weight::conformal_squared(u), coarse());
    CHECK(c.value == doctest::Approx(m).epsilon(0.03));
    // Off-centre balls use the same machinery without mirror symmetry.
    const auto shifted = grid_capacity(DomainSpec::ball(std::vector<double>{0.25, 0.0, 0.0}, 1.0), Weight::unit(),
                                       coarse(1.0 / 8.0, 12.0));
    CHECK(shifted.value == doctest::Approx(1.0).epsilon(0.04));
  }

  TEST_CASE("error estimate brackets the true error") {
    GridCapacityParams p;
    p.h = 1.0 / 12.0;
    p.r_out = 16.0;
    const auto c = grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p);
    CHECK(std::abs(c.value - 1.0) <= c.error_estimate);
  }

  TEST_CASE("energy functionals on the solved potential") {
    const auto u = ConformalFactor::multipole(3, {{{0.2, 0.0, 0.0}, 0.6}, {{-0.3, 0.1, 0.0}, 0.4}});
    const auto domain = DomainSpec::ball(3, 1.0);
    const auto flat = grid_capacity(domain, Weight::unit(), coarse(1.0 / 8.0, 10.0));
    const auto& phi = std::get<GridField>(flat.potential);
    // The solver minimizes exactly the discrete energy it reports.
    CHECK(capacity_energy(phi, Weight::unit()) == doctest::Approx(flat.value).epsilon(1e-10));
    // u >= 1 pointwise, so the weighted energy of the same phi is larger.
    CHECK(capacity_energy(phi, Weight::conformal_squared(u)) > capacity_energy(phi, Weight::unit()));
    const auto sym = symmetrized_lower_bound(phi);
    CHECK(sym.decaying);
    // Rearranging cell values is exact only as h -> 0; the excess is first order in h.
    const double tol = 2.0 / 8.0;
    CHECK(sym.value <= flat.value + tol);
    CHECK(sym.value >= flat_capacity_sphere(3, sym.radius) - tol);

    GridField bad = phi;
    bad[bad.size() - 1] = -0.5;  // far corner of the box, an exterior cell
    CHECK_THROWS_AS(discrete_energy(bad, Weight::unit()), InputError);
  }

  TEST_CASE("grid capacity rejects bad input") {
    CHECK_THROWS_AS(grid_capacity(DomainSpec::ball(4, 1.0), Weight::unit(), coarse()), InputError);
    auto p = coarse();
    p.h = 0.0;
    CHECK_THROWS_AS(grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p), InputError);
    CHECK_THROWS_AS(grid_capacity(DomainSpec::ball(3, 1.0), Weight::function([](const Vec3&) { return -1.0; }), coarse()),
                    InputError);
  }

  TEST_CASE("an iteration cap that is too small is a numerical failure") {
    auto p = coarse(1.0 / 8.0, 8.0);
    p.iteration_factor = 0.05;
    p.preconditioner = Preconditioner::jacobi;
    CHECK_THROWS_AS(grid_capacity(DomainSpec::ball(3, 1.0), Weight::unit(), p), NumericalError);
  }
}
