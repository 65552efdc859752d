#include "vpi/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/quadrature.hpp"

namespace vpi {

namespace {

double volume_by_fractions(const DomainSpec& domain, double h, const Vec3& lo, const Vec3& hi) {
  std::array<long, 3> cells{};
  for (int a = 0; a < 3; ++a) cells[a] = static_cast<long>(std::ceil((hi[a] - lo[a]) / h));
  const double cell = h * h * h;
  const double step = 1e-2 * h;
  double total = 0.0;
  for (long i = 0; i < cells[0]; ++i) {
    for (long j = 0; j < cells[1]; ++j) {
      for (long k = 0; k < cells[2]; ++k) {
        const Vec3 x{lo[0] + (i + 0.5) * h, lo[1] + (j + 0.5) * h, lo[2] + (k + 0.5) * h};
        const double phi = domain.level(x);
        const Vec3 g = domain.level_gradient(x, step);
        const double gn = norm(g);
        if (gn < 1e-12) {
          if (phi < 0.0) total += cell;
          continue;
        }
        const double dist = phi / gn;
        if (dist > h) continue;
        if (dist < -h) {
          total += cell;
          continue;
        }
        Vec3 a{std::abs(g[0]) / gn, std::abs(g[1]) / gn, std::abs(g[2]) / gn};
        const double t = -dist / h + 0.5 * (a[0] + a[1] + a[2]);
        total += cell * cube_fraction_below_plane(a, t);
      }
    }
  }
  return total;
}

struct Neighbour {
  double pos;
  double value;
  bool usable;
};

// Neighbour `offset` cells away along axis a, honouring a mirror at the lower face.
Neighbour neighbour(const GridField& f, std::size_t idx, int a, int offset) {
  const Mesh& mesh = f.mesh();
  const Axis& ax = mesh.axis(a);
  const auto c = mesh.coords(idx);
  const long i = static_cast<long>(c[a]) + offset;
  const long n = static_cast<long>(ax.cells());
  if (i >= n) return {0.0, 0.0, false};
  if (i < 0) {
    if (!ax.mirrored) return {0.0, 0.0, false};
    const long mi = -i - 1;  // reflected image of cell mi
    if (mi >= n) return {0.0, 0.0, false};
    auto mc = c;
    mc[a] = static_cast<std::size_t>(mi);
    const std::size_t nidx = mesh.index(mc[0], mc[1], mc[2]);
    return {-ax.center(static_cast<std::size_t>(mi)), f[nidx], mesh.tag(nidx) == mesh.tag(idx)};
  }
  auto nc = c;
  nc[a] = static_cast<std::size_t>(i);
  const std::size_t nidx = mesh.index(nc[0], nc[1], nc[2]);
  return {ax.center(static_cast<std::size_t>(i)), f[nidx], mesh.tag(nidx) == mesh.tag(idx)};
}

// Derivative at x0 of the quadratic through (x0,f0), (x1,f1), (x2,f2).
double lagrange_derivative(double x0, double f0, double x1, double f1, double x2, double f2) {
  return f0 * (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
         f1 * (x0 - x2) / ((x1 - x0) * (x1 - x2)) + f2 * (x0 - x1) / ((x2 - x0) * (x2 - x1));
}

void append_sphere(std::vector<BoundarySample>& out, const Vec3& c, double r, double h) {
  const auto nt = static_cast<std::size_t>(std::max(8.0, std::ceil(std::numbers::pi * r / h)));
  const std::size_t np = 2 * nt;
  const auto rule = gauss_legendre(nt);
  const double dphi = 2.0 * std::numbers::pi / double(np);
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = rule.nodes[i];
    const double s = std::sqrt(1.0 - t * t);
    for (std::size_t j = 0; j < np; ++j) {
      const double phi = dphi * double(j);
      const Vec3 nrm{s * std::cos(phi), s * std::sin(phi), t};
      out.push_back({c + r * nrm, nrm, rule.weights[i] * dphi * r * r});
    }
  }
}

}  // namespace

double cube_fraction_below_plane(Vec3 a, double t) {
  std::sort(a.begin(), a.end(), std::greater<>());
  const double sum = a[0] + a[1] + a[2];
  if (t <= 0.0) return 0.0;
  if (t >= sum) return 1.0;
  constexpr double tiny = 1e-6;
  double f = 0.0;
  if (a[1] < tiny) {
    f = t / a[0];
  } else if (a[2] < tiny) {
    for (int s0 = 0; s0 < 2; ++s0) {
      for (int s1 = 0; s1 < 2; ++s1) {
        const double sh = t - s0 * a[0] - s1 * a[1];
        if (sh > 0.0) f += ((s0 + s1) % 2 ? -1.0 : 1.0) * sh * sh;
      }
    }
    f /= 2.0 * a[0] * a[1];
  } else {
    for (int s0 = 0; s0 < 2; ++s0) {
      for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
          const double sh = t - s0 * a[0] - s1 * a[1] - s2 * a[2];
          if (sh > 0.0) f += ((s0 + s1 + s2) % 2 ? -1.0 : 1.0) * sh * sh * sh;
        }
      }
    }
    f /= 6.0 * a[0] * a[1] * a[2];
  }
  return std::clamp(f, 0.0, 1.0);
}

VolumeEstimate euclidean_volume(const DomainSpec& domain, double h,
                                std::optional<std::pair<Vec3, Vec3>> extents) {
  if (!(h > 0.0)) throw InputError("grid spacing must be positive");
  if (domain.is_centered_ball()) {
    const double v = *domain.exact_volume();
    return {v, 0.0, v, v};
  }
  if (domain.n() != 3) {
    if (!std::holds_alternative<DomainSpec::Ball>(domain.shape())) {
      throw InputError("only balls are supported outside three dimensions");
    }
    const double v = *domain.exact_volume();
    return {v, 0.0, v, v};
  }
  auto [lo, hi] = domain.bounding_box();
  if (extents) {
    for (int a = 0; a < 3; ++a) {
      if (lo[a] < extents->first[a] || hi[a] > extents->second[a]) {
        throw InputError("domain is not contained in the grid extents");
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::floor(lo[a] / h - 2.0) * h;
    hi[a] = std::ceil(hi[a] / h + 2.0) * h;
  }
  VolumeEstimate est;
  est.coarse = volume_by_fractions(domain, h, lo, hi);
  est.fine = volume_by_fractions(domain, 0.5 * h, lo, hi);
  est.value = (4.0 * est.fine - est.coarse) / 3.0;
  est.error = std::abs(est.fine - est.coarse);
  return est;
}

std::array<GridField, 3> gradient(const GridField& field) {
  const Mesh& mesh = field.mesh();
  std::array<GridField, 3> g{GridField(field.mesh_ptr()), GridField(field.mesh_ptr()),
                             GridField(field.mesh_ptr())};
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    const auto c = mesh.coords(idx);
    for (int a = 0; a < 3; ++a) {
      const double x0 = mesh.axis(a).center(c[a]);
      const double f0 = field[idx];
      const auto l = neighbour(field, idx, a, -1);
      const auto r = neighbour(field, idx, a, +1);
      double d = 0.0;
      if (l.usable && r.usable) {
        d = lagrange_derivative(x0, f0, l.pos, l.value, r.pos, r.value);
      } else if (r.usable) {
        const auto r2 = neighbour(field, idx, a, +2);
        d = r2.usable ? lagrange_derivative(x0, f0, r.pos, r.value, r2.pos, r2.value)
                      : (r.value - f0) / (r.pos - x0);
      } else if (l.usable) {
        const auto l2 = neighbour(field, idx, a, -2);
        d = l2.usable ? lagrange_derivative(x0, f0, l.pos, l.value, l2.pos, l2.value)
                      : (f0 - l.value) / (x0 - l.pos);
      }
      g[a][idx] = d;
    }
  }
  return g;
}

double dirichlet_energy(const GridField& field, const GridField* weight) {
  const Mesh& mesh = field.mesh();
  if (weight && weight->size() != field.size()) throw InputError("weight does not match the field");
  const auto g = gradient(field);
  double e = 0.0;
  for (std::size_t idx = 0; idx < field.size(); ++idx) {
    if (mesh.tag(idx) != CellTag::exterior) continue;
    double w = 1.0;
    if (weight) {
      w = (*weight)[idx];
      if (w < 0.0) throw InputError("negative weight encountered");
    }
    const double g2 = g[0][idx] * g[0][idx] + g[1][idx] * g[1][idx] + g[2][idx] * g[2][idx];
    e += w * g2 * mesh.measure(idx);
  }
  return e;
}

Vec3 level_set_normal(const DomainSpec& domain, const Vec3& x, double step) {
  const Vec3 g = domain.level_gradient(x, step);
  const double gn = norm(g);
  if (gn < 1e-8) throw NumericalError("degenerate level set: vanishing gradient at boundary sample");
  return (1.0 / gn) * g;
}

double level_set_mean_curvature(const DomainSpec& domain, const Vec3& x, double step) {
  double div = 0.0;
  for (int a = 0; a < 3; ++a) {
    Vec3 xp = x;
    Vec3 xm = x;
    xp[a] += step;
    xm[a] -= step;
    div += (level_set_normal(domain, xp, step)[a] - level_set_normal(domain, xm, step)[a]) /
           (2.0 * step);
  }
  return 0.5 * div;
}

double boundary_mean_curvature(const DomainSpec& domain, const Vec3& x, double step) {
  if (auto h0 = domain.closed_form_mean_curvature(x)) return *h0;
  return level_set_mean_curvature(domain, x, step);
}

std::vector<BoundarySample> boundary_samples(const DomainSpec& domain, double h) {
  if (!(h > 0.0)) throw InputError("sample spacing must be positive");
  if (domain.n() != 3) throw InputError("boundary sampling is three-dimensional");
  std::vector<BoundarySample> out;
  if (const auto* b = std::get_if<DomainSpec::Ball>(&domain.shape())) {
    append_sphere(out, {b->center[0], b->center[1], b->center[2]}, b->radius, h);
  } else if (const auto* e = std::get_if<DomainSpec::Ellipsoid>(&domain.shape())) {
    const auto& s = e->semi_axes;
    const double rmax = std::max({s[0], s[1], s[2]});
    const auto nt = static_cast<std::size_t>(std::max(8.0, std::ceil(std::numbers::pi * rmax / h)));
    const std::size_t np = 2 * nt;
    const auto rule = gauss_legendre(nt);
    const double dphi = 2.0 * std::numbers::pi / double(np);
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = rule.nodes[i];
      const double st = std::sqrt(1.0 - t * t);
      for (std::size_t j = 0; j < np; ++j) {
        const double phi = dphi * double(j);
        const double cp = std::cos(phi);
        const double sp = std::sin(phi);
        const Vec3 y{s[0] * st * cp, s[1] * st * sp, s[2] * t};
        Vec3 nrm{y[0] / (s[0] * s[0]), y[1] / (s[1] * s[1]), y[2] / (s[2] * s[2])};
        nrm = (1.0 / norm(nrm)) * nrm;
        const double da = std::sqrt(s[1] * s[1] * s[2] * s[2] * st * st * cp * cp +
                                    s[0] * s[0] * s[2] * s[2] * st * st * sp * sp +
                                    s[0] * s[0] * s[1] * s[1] * t * t);
        out.push_back({e->center + y, nrm, rule.weights[i] * dphi * da});
      }
    }
  } else if (const auto* u = std::get_if<DomainSpec::UnionOfBalls>(&domain.shape())) {
    for (std::size_t bi = 0; bi < u->balls.size(); ++bi) {
      const auto& b = u->balls[bi];
      std::vector<BoundarySample> sphere;
      append_sphere(sphere, {b.center[0], b.center[1], b.center[2]}, b.radius, h);
      for (const auto& s : sphere) {
        bool hidden = false;
        for (std::size_t bj = 0; bj < u->balls.size() && !hidden; ++bj) {
          if (bj == bi) continue;
          const auto& o = u->balls[bj];
          const Vec3 d = s.point - Vec3{o.center[0], o.center[1], o.center[2]};
          hidden = norm(d) < o.radius;
        }
        if (!hidden) out.push_back(s);
      }
    }
  } else {
    // Smoothed delta of width eps around the zero level, points projected onto it.
    const auto [blo, bhi] = domain.bounding_box();
    const double eps = 1.5 * h;
    const double step = 1e-2 * h;
    std::array<long, 3> cells{};
    Vec3 lo{};
    for (int a = 0; a < 3; ++a) {
      lo[a] = blo[a] - 3.0 * h;
      cells[a] = static_cast<long>(std::ceil((bhi[a] - blo[a] + 6.0 * h) / h));
    }
    for (long i = 0; i < cells[0]; ++i) {
      for (long j = 0; j < cells[1]; ++j) {
        for (long k = 0; k < cells[2]; ++k) {
          Vec3 x{lo[0] + (i + 0.5) * h, lo[1] + (j + 0.5) * h, lo[2] + (k + 0.5) * h};
          const double phi = domain.level(x);
          const Vec3 g = domain.level_gradient(x, step);
          const double gn = norm(g);
          if (gn < 1e-12) continue;
          const double d = phi / gn;
          if (std::abs(d) >= eps) continue;
          const double w = (1.0 + std::cos(std::numbers::pi * d / eps)) / (2.0 * eps) * h * h * h;
          for (int it = 0; it < 4; ++it) {
            const Vec3 gp = domain.level_gradient(x, step);
            const double g2 = dot(gp, gp);
            if (g2 < 1e-24) break;
            x = x - (domain.level(x) / g2) * gp;
          }
          out.push_back({x, level_set_normal(domain, x, step), w});
        }
      }
    }
  }
  return out;
}

double boundary_area_in_g(const DomainSpec& domain, const ConformalFactor& u, double h) {
  const int n = domain.n();
  if (u.n() != n) throw InputError("factor and domain dimensions differ");
  const double power = 2.0 * (n - 1) / (n - 2);
  if (n != 3) {
    if (!domain.is_centered_ball() || !u.is_radial()) {
      throw InputError("boundary area outside three dimensions needs a centred ball and radial u");
    }
    const double r = domain.ball_radius();
    return sphere_area(n) * std::pow(r, n - 1) * std::pow(u.radial_value(r), power);
  }
  double area = 0.0;
  for (const auto& s : boundary_samples(domain, h)) {
    const double v = u.value(s.point);
    if (!(v > 0.0)) throw InputError("conformal factor must be positive on the boundary");
    area += s.area * std::pow(v, power);
  }
  if (!(area > 0.0)) throw NumericalError("degenerate boundary: zero area");
  return area;
}

}  // namespace vpi
