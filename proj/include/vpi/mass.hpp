#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vpi/conformal_factor.hpp"

namespace vpi {

/// Metric components g_ij(x), written row-major into an n x n output.
using MetricFn = std::function<void(std::span<const double> x, std::span<double> g)>;

/// g = u^{4/(n-2)} delta.
MetricFn conformal_metric(const ConformalFactor& u);

/// Point evaluations on the coordinate sphere |x| = r with area weights.
struct SphereRule {
  std::vector<std::vector<double>> unit_points;
  std::vector<double> weights;  // sum to omega_{n-1}
};

/// Product rule on S^{n-1}: per polar angle, Gauss-Legendre in its cosine
/// (even sphere dimension) or the midpoint rule in the angle (odd), with 64
/// nodes for n = 3 and fewer in higher dimensions; trapezoid in the azimuth.
SphereRule sphere_rule(int n);

/// (1 / (2 (n-1) omega_{n-1})) * surface integral over |x| = r of
/// (g_ij,i - g_ii,j) nu_j dA, with metric derivatives by fourth-order central
/// differences. `min_radius` guards against spheres that cut the excised region.
double adm_flux_general(const MetricFn& metric, double r, int n, double min_radius = 0.0);

/// The same flux for g = u^{4/(n-2)} delta in closed form:
/// -(2 / ((n-2) omega_{n-1})) * surface integral of u^{(6-n)/(n-2)} d_nu u dA.
/// Radial factors use the exact one-term value.
double adm_conformal(const ConformalFactor& u, double r);

struct MassFit {
  double m_inf = 0.0;
  double amplitude = 0.0;
  double exponent = 0.0;
};

struct MassEstimate {
  double value = 0.0;
  std::vector<std::pair<double, double>> samples;  // (r_k, m(r_k)), r increasing
  MassFit fit;
  double residual = 0.0;  // |difference of the last two three-point fits|, or the last increment
  bool fit_rejected = false;  // non-monotone tail: value is the outermost sample
  std::string note;
};

/// Fits m(r) = m_inf + a r^{-s} through the three outermost samples of a
/// geometric radius sequence (ratio >= 2) and reports m_inf.
MassEstimate adm_extrapolate(const std::function<double(double)>& flux,
                             const std::vector<double>& radii, double min_radius = 0.0);
MassEstimate adm_extrapolate(const ConformalFactor& u, const std::vector<double>& radii,
                             double min_radius = 0.0);
MassEstimate adm_extrapolate(const MetricFn& metric, int n, const std::vector<double>& radii,
                             double min_radius = 0.0);

/// 2 * sum c_i for u = 1 + sum c_i |x - p_i|^{2-n}.
double mass_of_multipole(const std::vector<double>& charges);

}  // namespace vpi
