#include "vpi/conformal_factor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vpi/errors.hpp"

namespace vpi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// c |x - p|^{2-n} and its derivatives. The Laplacian uses the closed form
// k (k + n - 2) r^{k-2} with k = 2 - n, which vanishes identically.
// An empty center means the origin.
double dist2(std::span<const double> x, std::span<const double> p) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = p.empty() ? x[i] : x[i] - p[i];
    r2 += d * d;
  }
  return r2;
}

double monopole_value(std::span<const double> x, std::span<const double> p, double c, int n) {
  return c * std::pow(dist2(x, p), 0.5 * (2 - n));
}

void monopole_gradient_add(std::span<const double> x, std::span<const double> p, double c, int n,
                           std::span<double> out) {
  const double coef = c * (2 - n) * std::pow(dist2(x, p), -0.5 * n);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += coef * (p.empty() ? x[i] : x[i] - p[i]);
}

double monopole_laplacian(std::span<const double> x, std::span<const double> p, double c, int n) {
  const double k = 2.0 - n;
  return c * k * (k + n - 2.0) * std::pow(dist2(x, p), 0.5 * (k - 2.0));
}

void require_point(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n) {
    throw InputError("point has " + std::to_string(x.size()) + " coordinates, factor dimension is " +
                     std::to_string(n));
  }
}

Vec3 to_vec3(std::span<const double> x) { return {x[0], x[1], x[2]}; }

}  // namespace

ConformalFactor ConformalFactor::schwarzschild(int n, double mass) {
  if (n < 3) throw InputError("dimension must be >= 3");
  if (!(mass > 0.0)) throw InputError("Schwarzschild mass must be positive");
  return ConformalFactor(n, Schwarzschild{mass});
}

ConformalFactor ConformalFactor::multipole(int n, std::vector<Pole> poles) {
  if (n < 3) throw InputError("dimension must be >= 3");
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!(poles[i].charge > 0.0)) {
      throw InputError("poles[" + std::to_string(i) + "].charge must be positive");
    }
    if (static_cast<int>(poles[i].center.size()) != n) {
      throw InputError("poles[" + std::to_string(i) + "].center must have " + std::to_string(n) +
                       " coordinates");
    }
  }
  return ConformalFactor(n, Multipole{std::move(poles)});
}

ConformalFactor ConformalFactor::grid(SampleLattice lattice) {
  const auto& d = lattice.dims;
  if (d[0] < 3 || d[1] < 3 || d[2] < 3) throw InputError("sample lattice needs >= 3 nodes per axis");
  if (!(lattice.spacing > 0.0)) throw InputError("sample lattice spacing must be positive");
  if (lattice.values.size() != d[0] * d[1] * d[2]) {
    throw InputError("sample lattice value count does not match its dimensions");
  }
  // Least-squares fit of u - 1 = c / r over the outermost lattice nodes.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < d[0]; ++i) {
    for (std::size_t j = 0; j < d[1]; ++j) {
      for (std::size_t k = 0; k < d[2]; ++k) {
        const bool on_face = i == 0 || j == 0 || k == 0 || i + 1 == d[0] || j + 1 == d[1] ||
                             k + 1 == d[2];
        if (!on_face) continue;
        const Vec3 x = lattice.origin + lattice.spacing * Vec3{double(i), double(j), double(k)};
        const double r = norm(x);
        if (r == 0.0) continue;
        num += (lattice.values[lattice.index(i, j, k)] - 1.0) / r;
        den += 1.0 / (r * r);
      }
    }
  }
  const double c = den > 0.0 ? num / den : 0.0;
  return ConformalFactor(3, Grid{std::move(lattice), c});
}

ConformalFactor ConformalFactor::sampled(const std::function<double(const Vec3&)>& fn, double lo,
                                         double hi, double spacing) {
  if (!(hi > lo) || !(spacing > 0.0)) throw InputError("invalid sampling box");
  SampleLattice lat;
  const auto nodes = static_cast<std::size_t>(std::llround((hi - lo) / spacing)) + 1;
  lat.origin = {lo, lo, lo};
  lat.spacing = spacing;
  lat.dims = {nodes, nodes, nodes};
  lat.values.resize(nodes * nodes * nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = 0; j < nodes; ++j) {
      for (std::size_t k = 0; k < nodes; ++k) {
        const Vec3 x = lat.origin + spacing * Vec3{double(i), double(j), double(k)};
        lat.values[lat.index(i, j, k)] = fn(x);
      }
    }
  }
  return grid(std::move(lat));
}

ConformalFactor::Family ConformalFactor::family() const noexcept {
  return static_cast<Family>(rep_.index());
}

std::string ConformalFactor::family_name() const {
  switch (family()) {
    case Family::schwarzschild:
      return "schwarzschild";
    case Family::multipole:
      return "multipole";
    case Family::grid:
      return "grid";
  }
  return "unknown";
}

double ConformalFactor::grid_value(const Grid& g, const Vec3& x) const {
  const auto& lat = g.lattice;
  double t[3];
  std::size_t base[3];
  for (int a = 0; a < 3; ++a) {
    const double s = (x[a] - lat.origin[a]) / lat.spacing;
    const double top = static_cast<double>(lat.dims[a] - 1);
    if (s < 0.0 || s > top) {
      const double r = norm(x);
      return 1.0 + g.far_charge / r;
    }
    const double fl = std::min(std::floor(s), top - 1.0);
    base[a] = static_cast<std::size_t>(fl);
    t[a] = s - fl;
  }
  double v = 0.0;
  for (int di = 0; di < 2; ++di) {
    for (int dj = 0; dj < 2; ++dj) {
      for (int dk = 0; dk < 2; ++dk) {
        const double w = (di ? t[0] : 1.0 - t[0]) * (dj ? t[1] : 1.0 - t[1]) *
                         (dk ? t[2] : 1.0 - t[2]);
        if (w == 0.0) continue;
        v += w * lat.values[lat.index(base[0] + di, base[1] + dj, base[2] + dk)];
      }
    }
  }
  return v;
}

double ConformalFactor::value(std::span<const double> x) const {
  require_point(x, n_);
  return std::visit(
      overloaded{
          [&](const Schwarzschild& s) {
            return 1.0 + 0.5 * s.mass * std::pow(norm(x), 2.0 - n_);
          },
          [&](const Multipole& m) {
            double u = 1.0;
            for (const auto& p : m.poles) u += monopole_value(x, p.center, p.charge, n_);
            return u;
          },
          [&](const Grid& g) { return grid_value(g, to_vec3(x)); },
      },
      rep_);
}

void ConformalFactor::gradient(std::span<const double> x, std::span<double> out) const {
  require_point(x, n_);
  std::fill(out.begin(), out.end(), 0.0);
  std::visit(overloaded{
                 [&](const Schwarzschild& s) {
                   monopole_gradient_add(x, {}, 0.5 * s.mass, n_, out);
                 },
                 [&](const Multipole& m) {
                   for (const auto& p : m.poles) {
                     monopole_gradient_add(x, p.center, p.charge, n_, out);
                   }
                 },
                 [&](const Grid& g) {
                   const double h = g.lattice.spacing;
                   const Vec3 c = to_vec3(x);
                   for (int a = 0; a < 3; ++a) {
                     Vec3 xp = c;
                     Vec3 xm = c;
                     xp[a] += h;
                     xm[a] -= h;
                     out[a] = (grid_value(g, xp) - grid_value(g, xm)) / (2.0 * h);
                   }
                 },
             },
             rep_);
}

double ConformalFactor::laplacian(std::span<const double> x) const {
  require_point(x, n_);
  return std::visit(
      overloaded{
          [&](const Schwarzschild& s) {
            return monopole_laplacian(x, {}, 0.5 * s.mass, n_);
          },
          [&](const Multipole& m) {
            double lap = 0.0;
            for (const auto& p : m.poles) lap += monopole_laplacian(x, p.center, p.charge, n_);
            return lap;
          },
          [&](const Grid& g) {
            const double h = g.lattice.spacing;
            const Vec3 c = to_vec3(x);
            const double u0 = grid_value(g, c);
            double lap = 0.0;
            for (int a = 0; a < 3; ++a) {
              Vec3 xp = c;
              Vec3 xm = c;
              xp[a] += h;
              xm[a] -= h;
              lap += grid_value(g, xp) - 2.0 * u0 + grid_value(g, xm);
            }
            return lap / (h * h);
          },
      },
      rep_);
}

bool ConformalFactor::is_radial() const {
  return std::visit(overloaded{
                        [](const Schwarzschild&) { return true; },
                        [](const Multipole& m) {
                          return std::all_of(m.poles.begin(), m.poles.end(), [](const Pole& p) {
                            return std::all_of(p.center.begin(), p.center.end(),
                                               [](double c) { return c == 0.0; });
                          });
                        },
                        [](const Grid&) { return false; },
                    },
                    rep_);
}

double ConformalFactor::radial_value(double r) const {
  if (!is_radial()) throw InputError("conformal factor is not radial");
  return 1.0 + far_field_charge() * std::pow(r, 2.0 - n_);
}

double ConformalFactor::radial_derivative(double r) const {
  if (!is_radial()) throw InputError("conformal factor is not radial");
  return far_field_charge() * (2.0 - n_) * std::pow(r, 1.0 - n_);
}

bool ConformalFactor::mirror_symmetric(int axis) const {
  return std::visit(overloaded{
                        [](const Schwarzschild&) { return true; },
                        [&](const Multipole& m) {
                          for (const auto& p : m.poles) {
                            auto mirrored = p.center;
                            mirrored[axis] = -mirrored[axis];
                            const bool found =
                                std::any_of(m.poles.begin(), m.poles.end(), [&](const Pole& q) {
                                  return q.charge == p.charge && q.center == mirrored;
                                });
                            if (!found) return false;
                          }
                          return true;
                        },
                        [&](const Grid& g) {
                          // Centred along the axis with reflected nodes carrying equal values.
                          const auto& lat = g.lattice;
                          const auto d = lat.dims;
                          const double half = 0.5 * lat.spacing * double(d[axis] - 1);
                          if (std::abs(lat.origin[axis] + half) > 1e-12 * std::max(1.0, half)) {
                            return false;
                          }
                          for (std::size_t i = 0; i < d[0]; ++i) {
                            for (std::size_t j = 0; j < d[1]; ++j) {
                              for (std::size_t k = 0; k < d[2]; ++k) {
                                std::array<std::size_t, 3> m{i, j, k};
                                m[axis] = d[axis] - 1 - m[axis];
                                const double a = lat.values[lat.index(i, j, k)];
                                const double b = lat.values[lat.index(m[0], m[1], m[2])];
                                if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) return false;
                              }
                            }
                          }
                          return true;
                        },
                    },
                    rep_);
}

double ConformalFactor::far_field_charge() const {
  return std::visit(overloaded{
                        [](const Schwarzschild& s) { return 0.5 * s.mass; },
                        [](const Multipole& m) {
                          double c = 0.0;
                          for (const auto& p : m.poles) c += p.charge;
                          return c;
                        },
                        [](const Grid& g) { return g.far_charge; },
                    },
                    rep_);
}

const std::vector<Pole>& ConformalFactor::poles() const {
  if (const auto* m = std::get_if<Multipole>(&rep_)) return m->poles;
  throw InputError("conformal factor is not a multipole");
}

double ConformalFactor::schwarzschild_mass() const {
  if (const auto* s = std::get_if<Schwarzschild>(&rep_)) return s->mass;
  throw InputError("conformal factor is not Schwarzschild");
}

const SampleLattice& ConformalFactor::lattice() const {
  if (const auto* g = std::get_if<Grid>(&rep_)) return g->lattice;
  throw InputError("conformal factor is not lattice-sampled");
}

}  // namespace vpi
