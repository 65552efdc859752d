#include "vpi/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/measure.hpp"

namespace vpi {

double MinimalityResidual::sup_norm() const {
  double s = 0.0;
  for (const auto& r : samples) s = std::max(s, std::abs(r.value));
  return s;
}

namespace {

void require_radial_ball(const ConformalFactor& u, const DomainSpec& domain) {
  if (!domain.is_centered_ball() || !u.is_radial()) {
    throw InputError("in dimension " + std::to_string(domain.n()) +
                     " only centred balls with radial factors are supported");
  }
}

void require_same_dimension(const ConformalFactor& u, const DomainSpec& domain) {
  if (u.n() != domain.n()) {
    throw InputError("factor dimension " + std::to_string(u.n()) + " differs from domain dimension " +
                     std::to_string(domain.n()));
  }
}

/// Exterior sample points (see the header) fed to `visit`.
void for_each_sample(const ConformalFactor& u, const DomainSpec& domain, double h,
                     const std::function<void(std::span<const double>)>& visit) {
  if (!(h > 0.0)) throw InputError("resolution h must be positive");
  require_same_dimension(u, domain);
  const int n = domain.n();
  if (n != 3) {
    require_radial_ball(u, domain);
    const double r0 = domain.ball_radius();
    std::vector<double> x(n, 0.0);
    for (int k = 0; k <= 96; ++k) {
      x[0] = r0 * std::pow(64.0, k / 96.0);
      visit(x);
    }
    return;
  }
  const auto [lo, hi] = domain.bounding_box();
  const Vec3 mid = 0.5 * (lo + hi);
  double rho = 0.0;
  for (int a = 0; a < 3; ++a) rho = std::max(rho, 0.5 * (hi[a] - lo[a]));
  const double spacing = std::max(h, 4.0 * rho / 64.0);
  const auto cells = static_cast<long>(std::ceil(2.0 * rho / spacing));
  for (long i = -cells; i <= cells; ++i) {
    for (long j = -cells; j <= cells; ++j) {
      for (long k = -cells; k <= cells; ++k) {
        const Vec3 x = mid + Vec3{spacing * i, spacing * j, spacing * k};
        if (domain.level(x) > 0.0) visit(x);
      }
    }
  }
  // Far shells on a Fibonacci lattice of directions.
  constexpr int kDirections = 48;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int s = 1; s <= 6; ++s) {
    const double r = rho * std::pow(2.0, s + 1);
    for (int d = 0; d < kDirections; ++d) {
      const double z = 1.0 - 2.0 * (d + 0.5) / kDirections;
      const double q = std::sqrt(1.0 - z * z);
      const Vec3 x = mid + r * Vec3{q * std::cos(golden * d), q * std::sin(golden * d), z};
      if (domain.level(x) > 0.0) visit(x);
    }
  }
}

}  // namespace

MinimalityResidual minimality_residual(const ConformalFactor& u, const DomainSpec& domain, double h) {
  if (!(h > 0.0)) throw InputError("resolution h must be positive");
  require_same_dimension(u, domain);
  MinimalityResidual res;
  const int n = domain.n();
  if (n != 3) {
    require_radial_ball(u, domain);
    const double r = domain.ball_radius();
    std::vector<double> x(n, 0.0), nu(n, 0.0);
    x[0] = r;
    nu[0] = 1.0;
    res.samples.push_back({x, minimality_integrand(u, x, nu, 1.0 / r)});
    return res;
  }
  for (const auto& s : boundary_samples(domain, h)) {
    const Vec3 nu = level_set_normal(domain, s.point, h);
    const double h0 = level_set_mean_curvature(domain, s.point, h);
    res.samples.push_back({{s.point[0], s.point[1], s.point[2]}, minimality_integrand(u, s.point, nu, h0)});
  }
  return res;
}

namespace {

/// Change of the 7-point Laplacian from stencil width s to 2s, s the lattice
/// spacing: about three times the truncation error of the width-s stencil.
double stencil_truncation(const ConformalFactor& u, std::span<const double> x) {
  const double s = u.lattice().spacing;
  const Vec3 c{x[0], x[1], x[2]};
  const double u0 = u.value(c);
  double wide = 0.0;
  for (int a = 0; a < 3; ++a) {
    Vec3 p = c, m = c;
    p[a] += 2.0 * s;
    m[a] -= 2.0 * s;
    wide += u.value(p) - 2.0 * u0 + u.value(m);
  }
  return wide / (4.0 * s * s) - u.laplacian(c);
}

}  // namespace

SampleCheck check_superharmonic(const ConformalFactor& u, const DomainSpec& domain, double h) {
  SampleCheck c;
  c.tolerance = 10.0 * h * h;
  c.worst = std::numeric_limits<double>::infinity();
  const bool lattice = u.family() == ConformalFactor::Family::grid;
  for_each_sample(u, domain, h, [&](std::span<const double> x) {
    const double v = -u.laplacian(x);
    ++c.samples;
    const double tol = c.tolerance + (lattice ? std::abs(stencil_truncation(u, x)) : 0.0);
    if (v < -tol) ++c.violations;
    if (v < c.worst) {
      c.worst = v;
      c.worst_point.assign(x.begin(), x.end());
    }
  });
  c.ok = c.violations == 0;
  return c;
}

SampleCheck check_u_ge_one(const ConformalFactor& u, const DomainSpec& domain, double h) {
  SampleCheck c;
  c.tolerance = 1e-9;
  c.worst = std::numeric_limits<double>::infinity();
  for_each_sample(u, domain, h, [&](std::span<const double> x) {
    const double v = u.value(x);
    ++c.samples;
    if (v < 1.0 - c.tolerance) ++c.violations;
    if (v < c.worst) {
      c.worst = v;
      c.worst_point.assign(x.begin(), x.end());
    }
  });
  c.ok = c.violations == 0;
  return c;
}

MeanConvexity mean_convex(const DomainSpec& domain, double h) {
  MeanConvexity mc;
  if (domain.n() != 3) {
    if (!domain.is_centered_ball()) throw InputError("mean convexity in n != 3 needs a centred ball");
    mc.min_h0 = 1.0 / domain.ball_radius();
    return mc;
  }
  mc.min_h0 = std::numeric_limits<double>::infinity();
  for (const auto& s : boundary_samples(domain, h)) {
    mc.min_h0 = std::min(mc.min_h0, boundary_mean_curvature(domain, s.point, h));
  }
  mc.ok = mc.min_h0 > 0.0;
  return mc;
}

}  // namespace vpi
