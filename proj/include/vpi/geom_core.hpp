#pragma once

#include <span>

#include "vpi/conformal_factor.hpp"
#include "vpi/dimension.hpp"

namespace vpi {

/// u = 1 + m / (2 |x|^{n-2}).
inline ConformalFactor schwarzschild_factor(int n, double mass) {
  return ConformalFactor::schwarzschild(n, mass);
}

/// Coordinate radius (m/2)^{1/(n-2)} of the minimal sphere of Schwarzschild(n, m).
double horizon_radius(int n, double mass);

/// Scalar curvature of u^{4/(n-2)} delta over a flat background:
/// R_g = 4(n-1)/(n-2) * u^{-(n+2)/(n-2)} * (-Laplacian u).
double scalar_curvature(const ConformalFactor& u, std::span<const double> x);

/// Mean curvature of a hypersurface in g = u^{4/(n-2)} delta from its flat data:
/// h_g = 2/(n-2) * u^{-n/(n-2)} * (d_nu u + (n-2)/2 * h0 * u).
///
/// `nu` is the unit normal pointing out of the excised region and `h0` the
/// flat mean curvature as the AVERAGE of the principal curvatures (a sphere of
/// radius r has h0 = 1/r). This is the convention in which the Schwarzschild
/// horizon comes out minimal.
double mean_curvature_conformal(const ConformalFactor& u, std::span<const double> x,
                                std::span<const double> nu, double h0);

/// d_nu u + (n-2)/2 * h0 * u: vanishes exactly where the boundary is minimal in g.
double minimality_integrand(const ConformalFactor& u, std::span<const double> x,
                            std::span<const double> nu, double h0);

/// (V / beta_n)^{(n-2)/n}, the volumetric lower bound on the mass.
double rhs_volumetric(const Dimension& dim, double volume);

/// (1/2) (A / omega_{n-1})^{(n-2)/(n-1)}, the Penrose lower bound on the mass.
double rhs_rpi(const Dimension& dim, double area);

struct SchwarzschildData {
  int n = 3;
  double mass = 0.0;
  double horizon_radius = 0.0;
  double horizon_area = 0.0;  // area of the horizon measured in g
  double horizon_volume = 0.0;  // flat volume of the excised ball
  double rhs_rpi = 0.0;
  double rhs_vol = 0.0;
};

/// Closed-form horizon quantities of Schwarzschild(n, m); rhs_rpi = m and rhs_vol = m/2.
SchwarzschildData schwarzschild_data(int n, double mass);

}  // namespace vpi
