#include "vpi/mass.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/quadrature.hpp"

namespace vpi {

MetricFn conformal_metric(const ConformalFactor& u) {
  const int n = u.n();
  return [u, n](std::span<const double> x, std::span<double> g) {
    const double v = u.value(x);
    if (!(v > 0.0)) throw NumericalError("conformal factor is not positive on the sphere");
    const double s = std::pow(v, 4.0 / (n - 2));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g[i * n + j] = i == j ? s : 0.0;
    }
  };
}

namespace {

std::size_t polar_nodes(int n) {
  switch (n) {
    case 3: return 64;
    case 4: return 24;
    case 5: return 16;
    case 6: return 10;
    default: return 8;
  }
}

void check_radius(double r, double min_radius) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  if (r <= min_radius) {
    throw InputError("flux sphere of radius " + std::to_string(r) +
                     " lies inside the excised region (circumradius " + std::to_string(min_radius) + ")");
  }
}

}  // namespace

SphereRule sphere_rule(int n) {
  if (n < 3) throw InputError("dimension must be >= 3, got " + std::to_string(n));
  const std::size_t np = polar_nodes(n);
  const std::size_t na = 2 * np;
  // S^1: trapezoid in the azimuth.
  SphereRule rule;
  for (std::size_t k = 0; k < na; ++k) {
    const double phi = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(na);
    rule.unit_points.push_back({std::cos(phi), std::sin(phi)});
    rule.weights.push_back(2.0 * std::numbers::pi / static_cast<double>(na));
  }
  const GaussRule gl = gauss_legendre(np);
  // S^k = (cos t, sin t * S^{k-1}) with area element sin^{k-1} t dt.
  for (int k = 2; k <= n - 1; ++k) {
    SphereRule next;
    for (std::size_t q = 0; q < np; ++q) {
      double c, s, wq;
      if (k % 2 == 0) {
        // Gauss-Legendre in cos t: the weight (1 - c^2)^{(k-2)/2} is a polynomial.
        c = gl.nodes[q];
        s = std::sqrt(1.0 - c * c);
        wq = gl.weights[q] * std::pow(s, k - 2);
      } else {
        // Midpoint rule in t: f(cos t) sin^{k-1} t is even and 2 pi periodic.
        const double t = std::numbers::pi * (static_cast<double>(q) + 0.5) / static_cast<double>(np);
        c = std::cos(t);
        s = std::sin(t);
        wq = std::numbers::pi / static_cast<double>(np) * std::pow(s, k - 1);
      }
      for (std::size_t p = 0; p < rule.weights.size(); ++p) {
        std::vector<double> pt{c};
        for (double y : rule.unit_points[p]) pt.push_back(s * y);
        next.unit_points.push_back(std::move(pt));
        next.weights.push_back(wq * rule.weights[p]);
      }
    }
    rule = std::move(next);
  }
  return rule;
}

double adm_flux_general(const MetricFn& metric, double r, int n, double min_radius) {
  check_radius(r, min_radius);
  const SphereRule rule = sphere_rule(n);
  const double delta = 1e-2 * r;
  const std::size_t nn = static_cast<std::size_t>(n * n);
  std::vector<double> x(n), xs(n), g(nn);
  std::vector<double> dg(nn * n);  // dg[k * n*n + i*n + j] = d_k g_ij
  constexpr std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
  constexpr std::array<double, 4> coeffs{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
  double total = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const auto& nu = rule.unit_points[q];
    for (int i = 0; i < n; ++i) x[i] = r * nu[i];
    std::fill(dg.begin(), dg.end(), 0.0);
    for (int k = 0; k < n; ++k) {
      for (std::size_t o = 0; o < offsets.size(); ++o) {
        xs = x;
        xs[k] += offsets[o] * delta;
        metric(xs, g);
        for (std::size_t e = 0; e < nn; ++e) dg[k * nn + e] += coeffs[o] * g[e] / delta;
      }
    }
    double f = 0.0;
    for (int j = 0; j < n; ++j) {
      double div = 0.0;
      double dtrace = 0.0;
      for (int i = 0; i < n; ++i) {
        div += dg[i * nn + i * n + j];
        dtrace += dg[j * nn + i * n + i];
      }
      f += (div - dtrace) * nu[j];
    }
    total += rule.weights[q] * f;
  }
  return total * std::pow(r, n - 1) / (2.0 * (n - 1) * sphere_area(n));
}

double adm_conformal(const ConformalFactor& u, double r) {
  check_radius(r, 0.0);
  const int n = u.n();
  const double power = (6.0 - n) / (n - 2.0);
  const double scale = -2.0 / ((n - 2.0) * sphere_area(n));
  if (u.is_radial()) {
    const double v = u.radial_value(r);
    if (!(v > 0.0)) throw NumericalError("conformal factor is not positive at r = " + std::to_string(r));
    return scale * sphere_area(n) * std::pow(r, n - 1) * std::pow(v, power) * u.radial_derivative(r);
  }
  const SphereRule rule = sphere_rule(n);
  std::vector<double> x(n), grad(n);
  double total = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const auto& nu = rule.unit_points[q];
    for (int i = 0; i < n; ++i) x[i] = r * nu[i];
    const double v = u.value(x);
    if (!(v > 0.0)) throw NumericalError("conformal factor is not positive on the sphere r = " + std::to_string(r));
    u.gradient(x, grad);
    double dnu = 0.0;
    for (int i = 0; i < n; ++i) dnu += grad[i] * nu[i];
    total += rule.weights[q] * std::pow(v, power) * dnu;
  }
  return scale * std::pow(r, n - 1) * total;
}

namespace {

struct Triple {
  MassFit fit;
  bool ok = false;
};

/// m_inf + a r^{-s} through three samples at radii r, q r, q^2 r.
Triple fit_triple(double r1, double m1, double m2, double m3, double ratio) {
  Triple t;
  const double d1 = m2 - m1;
  const double d2 = m3 - m2;
  const double scale = std::max({std::abs(m1), std::abs(m2), std::abs(m3), 1e-300});
  if (std::abs(d1) <= 1e-15 * scale && std::abs(d2) <= 1e-15 * scale) {
    t.fit = {m3, 0.0, 0.0};
    t.ok = true;
    return t;
  }
  const double rho = d2 / d1;
  if (!(rho > 0.0 && rho < 1.0)) return t;
  const double s = -std::log(rho) / std::log(ratio);
  const double m_inf = m3 + d2 * rho / (1.0 - rho);
  // m1 - m_inf = a r1^{-s}
  t.fit = {m_inf, (m1 - m_inf) * std::pow(r1, s), s};
  t.ok = true;
  return t;
}

}  // namespace

MassEstimate adm_extrapolate(const std::function<double(double)>& flux,
                             const std::vector<double>& radii, double min_radius) {
  if (radii.size() < 3) throw InputError("mass extrapolation needs at least 3 radii");
  const double ratio = radii[1] / radii[0];
  if (!(ratio >= 2.0 - 1e-12)) throw InputError("mass radii must grow geometrically with ratio >= 2");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (std::abs(radii[k] / radii[k - 1] - ratio) > 1e-9 * ratio) {
      throw InputError("mass radii must form a geometric sequence");
    }
  }
  for (double r : radii) {
    if (r < 4.0 * min_radius) {
      throw InputError("mass radius " + std::to_string(r) + " is not beyond 4x the circumradius " +
                       std::to_string(min_radius));
    }
  }
  MassEstimate est;
  for (double r : radii) est.samples.emplace_back(r, flux(r));
  const std::size_t k = est.samples.size();
  auto triple_at = [&](std::size_t last) {
    return fit_triple(est.samples[last - 2].first, est.samples[last - 2].second,
                      est.samples[last - 1].second, est.samples[last].second, ratio);
  };
  const Triple outer = triple_at(k - 1);
  if (!outer.ok) {
    est.fit_rejected = true;
    est.value = est.samples.back().second;
    est.residual = std::abs(est.samples[k - 1].second - est.samples[k - 2].second);
    est.note = "non-monotone tail; fit rejected, outermost sample reported";
    return est;
  }
  est.fit = outer.fit;
  est.value = outer.fit.m_inf;
  if (k >= 4) {
    const Triple inner = triple_at(k - 2);
    est.residual = inner.ok ? std::abs(inner.fit.m_inf - outer.fit.m_inf)
                            : std::abs(est.samples[k - 1].second - est.samples[k - 2].second);
  } else {
    est.residual = std::abs(est.samples[k - 1].second - est.samples[k - 2].second);
  }
  return est;
}

MassEstimate adm_extrapolate(const ConformalFactor& u, const std::vector<double>& radii,
                             double min_radius) {
  return adm_extrapolate([&](double r) { return adm_conformal(u, r); }, radii, min_radius);
}

MassEstimate adm_extrapolate(const MetricFn& metric, int n, const std::vector<double>& radii,
                             double min_radius) {
  return adm_extrapolate([&](double r) { return adm_flux_general(metric, r, n); }, radii, min_radius);
}

double mass_of_multipole(const std::vector<double>& charges) {
  double sum = 0.0;
  for (std::size_t i = 0; i < charges.size(); ++i) {
    if (!(charges[i] > 0.0)) {
      throw InputError("charges[" + std::to_string(i) + "] must be positive, got " +
                       std::to_string(charges[i]));
    }
    sum += charges[i];
  }
  return 2.0 * sum;
}

}  // namespace vpi
