#include "vpi/geom_core.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "vpi/errors.hpp"

namespace vpi {

namespace {

double positive_value(const ConformalFactor& u, std::span<const double> x) {
  const double v = u.value(x);
  if (!(v > 0.0)) {
    throw InputError("conformal factor must be positive, got u = " + std::to_string(v));
  }
  return v;
}

}  // namespace

double horizon_radius(int n, double mass) {
  if (n < 3) throw InputError("dimension must be >= 3");
  if (!(mass > 0.0)) throw InputError("mass must be positive");
  return std::pow(0.5 * mass, 1.0 / (n - 2));
}

double scalar_curvature(const ConformalFactor& u, std::span<const double> x) {
  const int n = u.n();
  const double v = positive_value(u, x);
  return 4.0 * (n - 1) / (n - 2) * std::pow(v, -double(n + 2) / (n - 2)) * (-u.laplacian(x));
}

double minimality_integrand(const ConformalFactor& u, std::span<const double> x,
                            std::span<const double> nu, double h0) {
  const int n = u.n();
  if (static_cast<int>(nu.size()) != n) throw InputError("normal has the wrong dimension");
  if (std::abs(norm(nu) - 1.0) > 1e-10) throw InputError("normal must be a unit vector");
  const double v = positive_value(u, x);
  std::vector<double> grad(n);
  u.gradient(x, grad);
  double dnu = 0.0;
  for (int i = 0; i < n; ++i) dnu += grad[i] * nu[i];
  return dnu + 0.5 * (n - 2) * h0 * v;
}

double mean_curvature_conformal(const ConformalFactor& u, std::span<const double> x,
                                std::span<const double> nu, double h0) {
  const int n = u.n();
  const double res = minimality_integrand(u, x, nu, h0);
  return 2.0 / (n - 2) * std::pow(u.value(x), -double(n) / (n - 2)) * res;
}

double rhs_volumetric(const Dimension& dim, double volume) {
  if (!(volume > 0.0)) throw InputError("volume must be positive");
  const int n = dim.n();
  return std::pow(volume / dim.beta(), double(n - 2) / n);
}

double rhs_rpi(const Dimension& dim, double area) {
  if (!(area > 0.0)) throw InputError("area must be positive");
  const int n = dim.n();
  return 0.5 * std::pow(area / dim.omega(), double(n - 2) / (n - 1));
}

SchwarzschildData schwarzschild_data(int n, double mass) {
  const Dimension dim(n);
  SchwarzschildData d;
  d.n = n;
  d.mass = mass;
  d.horizon_radius = horizon_radius(n, mass);
  const auto u = ConformalFactor::schwarzschild(n, mass);
  // Area element of g on a coordinate sphere is u^{2(n-1)/(n-2)} dA_0.
  const double u_h = u.radial_value(d.horizon_radius);
  d.horizon_area = dim.omega() * std::pow(d.horizon_radius, n - 1) *
                   std::pow(u_h, 2.0 * (n - 1) / (n - 2));
  d.horizon_volume = dim.beta() * std::pow(d.horizon_radius, n);
  d.rhs_rpi = rhs_rpi(dim, d.horizon_area);
  d.rhs_vol = rhs_volumetric(dim, d.horizon_volume);
  return d;
}

}  // namespace vpi
