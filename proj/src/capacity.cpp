#include "vpi/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/symmetrize.hpp"

namespace vpi {

Weight Weight::conformal_squared(ConformalFactor u) {
  Weight w;
  w.kind_ = Kind::conformal;
  w.factor_ = std::move(u);
  return w;
}

Weight Weight::function(std::function<double(const Vec3&)> fn, std::array<bool, 3> mirror) {
  if (!fn) throw InputError("weight function is empty");
  Weight w;
  w.kind_ = Kind::function;
  w.fn_ = std::move(fn);
  w.mirror_ = mirror;
  return w;
}

double Weight::operator()(const Vec3& x) const {
  switch (kind_) {
    case Kind::unit:
      return 1.0;
    case Kind::conformal: {
      const double u = factor_->value(x);
      return u * u;
    }
    case Kind::function:
      return fn_(x);
  }
  return 1.0;
}

bool Weight::mirror_symmetric(int axis) const {
  switch (kind_) {
    case Kind::unit:
      return true;
    case Kind::conformal:
      return factor_->mirror_symmetric(axis);
    case Kind::function:
      return mirror_[axis];
  }
  return false;
}

double flat_capacity_sphere(int n, double radius) {
  if (n < 3) throw InputError("dimension must be >= 3, got " + std::to_string(n));
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  return std::pow(radius, n - 2);
}

CapacityResult radial_weighted_capacity(const ConformalFactor& u, double r_h) {
  if (!u.is_radial()) throw InputError("radial capacity needs a radial conformal factor");
  if (!(r_h > 0.0)) throw InputError("r_h must be positive");
  const int n = u.n();
  const double p = static_cast<double>(n - 2);
  auto r_of = [p](double s) { return std::pow(s, -1.0 / p); };
  auto integrand = [&](double s) {
    const double v = u.radial_value(r_of(s));
    if (!(v > 0.0)) throw NumericalError("conformal factor is not positive at r = " + std::to_string(r_of(s)));
    return 1.0 / (v * v);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

  const double s_h = std::pow(r_h, -p);
  const double r_t = 1e3 * r_h;
  const double s_t = std::pow(r_t, -p);
  const double c = (u.radial_value(r_t) - 1.0) / s_t;
  auto tail = [c](double s) { return s / (1.0 + c * s); };

  double err = 0.0;
  const double body = GK::integrate(integrand, s_t, s_h, 15, 1e-14, &err);
  const double total = body + tail(s_t);
  if (!(total > 0.0)) throw NumericalError("capacity integral is not positive");

  // phi(r) = (1/J) * integral_0^{s(r)} ds / u^2, accumulated inward from the outer radius.
  const auto radii = geometric_radii(r_h, 1e4, 2048);
  std::vector<double> acc(radii.size());
  double s_prev = std::pow(radii.back(), -p);
  double running = s_prev / (1.0 + c * s_prev);
  if (radii.back() < r_t) running = tail(s_t) + GK::integrate(integrand, s_t, s_prev, 10, 1e-13);
  acc.back() = running;
  for (std::size_t j = radii.size() - 1; j-- > 0;) {
    const double s = std::pow(radii[j], -p);
    running += GK::integrate(integrand, s_prev, s, 5, 1e-13);
    acc[j] = running;
    s_prev = s;
  }
  std::vector<double> phi(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) phi[j] = std::min(1.0, acc[j] / acc.front());

  CapacityResult res;
  res.value = 1.0 / total;
  res.energy = res.value * p * sphere_area(n);
  res.error_estimate = res.value * (err / total + 1e-13);
  res.potential = RadialProfile(radii, std::move(phi));
  res.stats.converged = true;
  return res;
}

namespace {

/// Symmetric positive definite 7-point operator over every cell of the mesh.
/// Interior cells are decoupled rows with unit diagonal and zero right-hand
/// side. Arrays are padded by the largest stride on both ends so the stencil
/// needs no bounds checks.
struct Operator {
  std::size_t cells = 0;
  std::size_t pad = 0;
  std::array<std::size_t, 3> dims{};
  std::array<std::size_t, 3> stride{};
  std::array<std::vector<double>, 3> plus;  // conductance between k and k + stride[a]
  std::vector<double> diag;
  std::vector<double> rhs;
  std::vector<double> robin;     // far-field conductance per cell
  std::vector<double> boundary;  // total link conductance per cell
  std::size_t unknowns = 0;

  double& t(int a, std::size_t k) { return plus[a][pad + k]; }
};

double face_area(const Mesh& mesh, const std::array<std::size_t, 3>& c, int a) {
  const int b = (a + 1) % 3;
  const int d = (a + 2) % 3;
  return mesh.axis(b).width(c[b]) * mesh.axis(d).width(c[d]);
}

Operator assemble(const Mesh& mesh, const Weight& w) {
  if (!mesh.domain()) throw InputError("capacity mesh has no domain");
  Operator op;
  op.cells = mesh.size();
  op.dims = mesh.dims();
  for (int a = 0; a < 3; ++a) op.stride[a] = mesh.stride(a);
  op.pad = op.stride[0];
  for (int a = 0; a < 3; ++a) op.plus[a].assign(op.cells + 2 * op.pad, 0.0);
  op.diag.assign(op.cells, 0.0);
  op.rhs.assign(op.cells, 0.0);
  op.robin.assign(op.cells, 0.0);
  op.boundary.assign(op.cells, 0.0);
  const auto dims = mesh.dims();

  for (std::size_t idx = 0; idx < op.cells; ++idx) {
    if (mesh.tag(idx) != CellTag::exterior) continue;
    ++op.unknowns;
    const auto c = mesh.coords(idx);
    const Vec3 x = mesh.center(idx);
    for (int a = 0; a < 3; ++a) {
      const Axis& ax = mesh.axis(a);
      const double area = face_area(mesh, c, a);
      if (c[a] + 1 < dims[a]) {
        const std::size_t nb = idx + op.stride[a];
        if (mesh.tag(nb) == CellTag::exterior) {
          Vec3 xf = x;
          xf[a] = ax.edges[c[a] + 1];
          const double t = w(xf) * area / (ax.center(c[a] + 1) - ax.center(c[a]));
          op.t(a, idx) = t;
          op.diag[idx] += t;
          op.diag[nb] += t;
        }
      }
      // Outer box faces carry the monopole Robin condition; mirror planes carry none.
      for (int side : {-1, 1}) {
        const bool at_face = side > 0 ? c[a] + 1 == dims[a] : (c[a] == 0 && !ax.mirrored);
        if (!at_face) continue;
        Vec3 xf = x;
        xf[a] = side > 0 ? ax.edges.back() : ax.edges.front();
        // Exterior solution of div(u^2 grad phi) = 0 with u = 1 + c/r is 1/(r + c):
        // d_r phi = -phi / (r u), with u = sqrt(w).
        const double wf = w(xf);
        const double alpha = side * xf[a] / (dot(xf, xf) * std::sqrt(wf));
        const double half = 0.5 * ax.width(c[a]);
        const double t = wf * alpha * area / (1.0 + alpha * half);
        op.robin[idx] += t;
        op.diag[idx] += t;
      }
    }
  }
  for (const auto& link : mesh.links()) {
    const auto c = mesh.coords(link.cell);
    const Axis& ax = mesh.axis(link.axis);
    const std::size_t nb = link.dir > 0 ? c[link.axis] + 1 : c[link.axis] - 1;
    const double d = std::abs(ax.center(nb) - ax.center(c[link.axis]));
    // Keep the crossing away from the cell centre so the conductance stays bounded.
    const double theta = std::max(link.theta, 1e-3);
    const double t = w(link.point) * face_area(mesh, c, link.axis) / (theta * d);
    op.boundary[link.cell] += t;
    op.diag[link.cell] += t;
    op.rhs[link.cell] += t;
  }
  for (std::size_t idx = 0; idx < op.cells; ++idx) {
    if (mesh.tag(idx) == CellTag::interior) op.diag[idx] = 1.0;
    if (!(op.diag[idx] > 0.0)) throw InputError("weight must be positive on the mesh");
  }
  return op;
}

/// y = A x; x and y are padded by op.pad on both ends.
void apply(const Operator& op, const double* x, double* y) {
  const std::size_t s0 = op.stride[0], s1 = op.stride[1], s2 = op.stride[2];
  const double* t0 = op.plus[0].data() + op.pad;
  const double* t1 = op.plus[1].data() + op.pad;
  const double* t2 = op.plus[2].data() + op.pad;
  const double* d = op.diag.data();
  for (std::size_t k = 0; k < op.cells; ++k) {
    y[k] = d[k] * x[k] - t0[k] * x[k + s0] - t0[k - s0] * x[k - s0] - t1[k] * x[k + s1] -
           t1[k - s1] * x[k - s1] - t2[k] * x[k + s2] - t2[k - s2] * x[k - s2];
  }
}

/// Multigrid V-cycle over pairwise cell aggregates. Coarse operators are the
/// Galerkin products with piecewise-constant prolongation, which keeps every
/// level a 7-point stencil on a tensor grid. Red-black Gauss-Seidel smoothing,
/// ordered so the cycle is a symmetric operator.
class Multigrid {
 public:
  explicit Multigrid(const Operator& fine) {
    levels_.push_back({&fine, {}, {}, {}, {}, {}, {}});
    while (levels_.size() < 12) {
      const Operator& op = *levels_.back().op;
      if (op.cells <= 4096) break;
      owned_.push_back(std::make_unique<Operator>(coarsen(op)));
      levels_.push_back({owned_.back().get(), {}, {}, {}, {}, {}, {}});
    }
    for (auto& lv : levels_) {
      const std::size_t m = lv.op->cells + 2 * lv.op->pad;
      lv.x.assign(m, 0.0);
      lv.b.assign(lv.op->cells, 0.0);
      lv.r.assign(lv.op->cells, 0.0);
      lv.decoupled.resize(lv.op->cells);
      for (std::size_t k = 0; k < lv.op->cells; ++k) lv.decoupled[k] = decoupled_row(*lv.op, k);
      lv.red.clear();
      lv.black.clear();
      const auto d = lv.op->dims;
      for (std::size_t i = 0; i < d[0]; ++i) {
        for (std::size_t j = 0; j < d[1]; ++j) {
          for (std::size_t k = 0; k < d[2]; ++k) {
            const std::size_t idx = (i * d[1] + j) * d[2] + k;
            ((i + j + k) % 2 == 0 ? lv.red : lv.black).push_back(idx);
          }
        }
      }
    }
  }

  /// z = M^{-1} r.
  void operator()(const double* r, double* z) {
    Level& top = levels_.front();
    std::copy(r, r + top.op->cells, top.b.begin());
    cycle(0);
    std::copy(top.x.begin() + static_cast<long>(top.op->pad),
              top.x.begin() + static_cast<long>(top.op->pad + top.op->cells), z);
  }

 private:
  struct Level {
    const Operator* op;
    std::vector<double> x;  // padded
    std::vector<double> b;
    std::vector<double> r;
    std::vector<std::size_t> red;
    std::vector<std::size_t> black;
    std::vector<char> decoupled;
  };

  static std::size_t agg(std::size_t i) { return i / 2; }

  static Operator coarsen(const Operator& f) {
    Operator c;
    for (int a = 0; a < 3; ++a) c.dims[a] = (f.dims[a] + 1) / 2;
    c.stride = {c.dims[1] * c.dims[2], c.dims[2], 1};
    c.cells = c.dims[0] * c.dims[1] * c.dims[2];
    c.pad = c.stride[0];
    for (int a = 0; a < 3; ++a) c.plus[a].assign(c.cells + 2 * c.pad, 0.0);
    c.diag.assign(c.cells, 0.0);
    std::vector<char> active(c.cells, 0);
    for (std::size_t i = 0; i < f.dims[0]; ++i) {
      for (std::size_t j = 0; j < f.dims[1]; ++j) {
        for (std::size_t k = 0; k < f.dims[2]; ++k) {
          const std::size_t fi = (i * f.dims[1] + j) * f.dims[2] + k;
          const std::size_t ci = (agg(i) * c.dims[1] + agg(j)) * c.dims[2] + agg(k);
          const std::array<std::size_t, 3> ijk{i, j, k};
          for (int a = 0; a < 3; ++a) {
            const double t = f.plus[a][f.pad + fi];
            if (t == 0.0) continue;
            if (agg(ijk[a]) == agg(ijk[a] + 1)) {
              c.diag[ci] -= 2.0 * t;
            } else {
              c.plus[a][c.pad + ci] += t;
            }
          }
          // Decoupled unit rows (cells inside Omega) stay out of the aggregate.
          if (!decoupled_row(f, fi)) {
            c.diag[ci] += f.diag[fi];
            active[ci] = 1;
          }
        }
      }
    }
    for (std::size_t ci = 0; ci < c.cells; ++ci) {
      if (!active[ci]) c.diag[ci] = 1.0;
    }
    return c;
  }

  static bool decoupled_row(const Operator& f, std::size_t fi) {
    if (f.diag[fi] != 1.0) return false;
    for (int a = 0; a < 3; ++a) {
      if (f.plus[a][f.pad + fi] != 0.0 || f.plus[a][f.pad + fi - f.stride[a]] != 0.0) return false;
    }
    return true;
  }

  static void sweep(Level& lv, const std::vector<std::size_t>& cells) {
    const Operator& op = *lv.op;
    const std::size_t s0 = op.stride[0], s1 = op.stride[1], s2 = op.stride[2];
    const double* t0 = op.plus[0].data() + op.pad;
    const double* t1 = op.plus[1].data() + op.pad;
    const double* t2 = op.plus[2].data() + op.pad;
    double* x = lv.x.data() + op.pad;
    for (std::size_t k : cells) {
      const double sum = lv.b[k] + t0[k] * x[k + s0] + t0[k - s0] * x[k - s0] + t1[k] * x[k + s1] +
                         t1[k - s1] * x[k - s1] + t2[k] * x[k + s2] + t2[k - s2] * x[k - s2];
      x[k] = sum / op.diag[k];
    }
  }

  void cycle(std::size_t l) {
    Level& lv = levels_[l];
    std::fill(lv.x.begin(), lv.x.end(), 0.0);
    if (l + 1 == levels_.size()) {
      for (int it = 0; it < 40; ++it) {
        sweep(lv, lv.red);
        sweep(lv, lv.black);
      }
      for (int it = 0; it < 40; ++it) {
        sweep(lv, lv.black);
        sweep(lv, lv.red);
      }
      return;
    }
    for (int it = 0; it < kSweeps; ++it) {
      sweep(lv, lv.red);
      sweep(lv, lv.black);
    }
    const Operator& op = *lv.op;
    apply(op, lv.x.data() + op.pad, lv.r.data());
    for (std::size_t k = 0; k < op.cells; ++k) lv.r[k] = lv.b[k] - lv.r[k];

    Level& cv = levels_[l + 1];
    const auto fd = op.dims;
    const auto cd = cv.op->dims;
    std::fill(cv.b.begin(), cv.b.end(), 0.0);
    for (std::size_t i = 0; i < fd[0]; ++i) {
      for (std::size_t j = 0; j < fd[1]; ++j) {
        const std::size_t frow = (i * fd[1] + j) * fd[2];
        const std::size_t crow = (agg(i) * cd[1] + agg(j)) * cd[2];
        for (std::size_t k = 0; k < fd[2]; ++k) cv.b[crow + agg(k)] += lv.r[frow + k];
      }
    }
    cycle(l + 1);
    double* x = lv.x.data() + op.pad;
    const double* xc = cv.x.data() + cv.op->pad;
    for (std::size_t i = 0; i < fd[0]; ++i) {
      for (std::size_t j = 0; j < fd[1]; ++j) {
        const std::size_t frow = (i * fd[1] + j) * fd[2];
        const std::size_t crow = (agg(i) * cd[1] + agg(j)) * cd[2];
        for (std::size_t k = 0; k < fd[2]; ++k) {
          // Decoupled rows keep their own (zero) correction.
          if (!lv.decoupled[frow + k]) x[frow + k] += xc[crow + agg(k)];
        }
      }
    }
    for (int it = 0; it < kSweeps; ++it) {
      sweep(lv, lv.black);
      sweep(lv, lv.red);
    }
  }

  static constexpr int kSweeps = 3;
  std::vector<Level> levels_;
  std::vector<std::unique_ptr<Operator>> owned_;
};

template <class Precond>
SolverStats conjugate_gradient(const Operator& op, std::vector<double>& x_out, double tol,
                               std::size_t max_iter, Precond&& precond) {
  const std::size_t n = op.cells;
  const std::size_t pad = op.pad;
  std::vector<double> pbuf(n + 2 * pad, 0.0);
  std::vector<double> xbuf(n + 2 * pad, 0.0);
  std::copy(x_out.begin(), x_out.end(), xbuf.begin() + static_cast<long>(pad));
  double* x = xbuf.data() + pad;
  double* p = pbuf.data() + pad;
  std::vector<double> r(n), q(n), z(n);

  apply(op, x, q.data());
  double b_norm = 0.0;
  double rr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    r[k] = op.rhs[k] - q[k];
    b_norm += op.rhs[k] * op.rhs[k];
    rr += r[k] * r[k];
  }
  b_norm = std::sqrt(b_norm);
  SolverStats st;
  st.unknowns = op.unknowns;
  if (b_norm == 0.0) {
    std::fill(x_out.begin(), x_out.end(), 0.0);
    st.converged = true;
    return st;
  }
  precond(r.data(), z.data());
  double rz = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = z[k];
    rz += r[k] * z[k];
  }
  for (st.iterations = 0;; ++st.iterations) {
    st.residual = std::sqrt(rr) / b_norm;
    if (st.residual < tol) {
      st.converged = true;
      break;
    }
    if (st.iterations >= max_iter) break;
    apply(op, p, q.data());
    double pq = 0.0;
    for (std::size_t k = 0; k < n; ++k) pq += p[k] * q[k];
    const double alpha = rz / pq;
    rr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
      rr += r[k] * r[k];
    }
    precond(r.data(), z.data());
    double rz_new = 0.0;
    for (std::size_t k = 0; k < n; ++k) rz_new += r[k] * z[k];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  std::copy(x, x + n, x_out.begin());
  return st;
}

SolverStats solve_linear(const Operator& op, std::vector<double>& x, double tol,
                         std::size_t max_iter, Preconditioner kind) {
  if (kind == Preconditioner::jacobi) {
    return conjugate_gradient(op, x, tol, max_iter, [&](const double* r, double* z) {
      for (std::size_t k = 0; k < op.cells; ++k) z[k] = r[k] / op.diag[k];
    });
  }
  Multigrid mg(op);
  return conjugate_gradient(op, x, tol, max_iter, mg);
}

double operator_energy(Operator& op, const std::vector<double>& x) {
  double e = 0.0;
  for (int a = 0; a < 3; ++a) {
    const std::size_t s = op.stride[a];
    for (std::size_t k = 0; k + s < op.cells; ++k) {
      const double t = op.t(a, k);
      if (t == 0.0) continue;
      const double g = x[k + s] - x[k];
      e += t * g * g;
    }
  }
  for (std::size_t k = 0; k < op.cells; ++k) {
    const double b = 1.0 - x[k];
    e += op.boundary[k] * b * b + op.robin[k] * x[k] * x[k];
  }
  return e;
}

void check_dimension(const DomainSpec& domain) {
  if (domain.n() != 3) {
    throw InputError("grid capacity is implemented for n = 3 only, got n = " +
                     std::to_string(domain.n()));
  }
}

struct Solve {
  double value = 0.0;
  double energy = 0.0;
  GridField phi;
  SolverStats stats;
};

Solve solve_once(const DomainSpec& domain, const Weight& weight, const GridCapacityParams& params) {
  GradedParams gp;
  gp.h = params.h;
  gp.r_out = params.r_out;
  gp.grading = params.grading;
  if (params.use_symmetry) {
    for (int a = 0; a < 3; ++a) gp.mirror[a] = domain.mirror_symmetric(a) && weight.mirror_symmetric(a);
  }
  auto mesh = Mesh::graded(domain, gp);
  Operator op = assemble(*mesh, weight);
  const double r_eff = std::max(domain.circumradius(), params.h);
  std::vector<double> x(op.cells, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (mesh->tag(k) == CellTag::exterior) x[k] = std::min(1.0, r_eff / norm(mesh->center(k)));
  }
  std::size_t longest = 0;
  for (auto d : mesh->dims()) longest = std::max(longest, d);
  const auto max_iter = static_cast<std::size_t>(params.iteration_factor * static_cast<double>(longest));
  Solve s;
  s.stats = solve_linear(op, x, params.tolerance, max_iter, params.preconditioner);
  if (!s.stats.converged && !(s.stats.residual < params.failure_residual)) {
    throw NumericalError("capacity solve did not converge: relative residual " +
                         std::to_string(s.stats.residual) + " after " +
                         std::to_string(s.stats.iterations) + " iterations");
  }
  s.energy = operator_energy(op, x) * mesh->multiplicity();
  s.value = s.energy / (4.0 * std::numbers::pi);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (mesh->tag(k) == CellTag::interior) x[k] = 1.0;
  }
  s.phi = GridField(mesh, std::move(x));
  return s;
}

}  // namespace

CapacityResult grid_capacity(const DomainSpec& domain, const Weight& weight,
                             const GridCapacityParams& params) {
  check_dimension(domain);
  if (!(params.h > 0.0)) throw InputError("resolution h must be positive");
  if (!(params.tolerance > 0.0)) throw InputError("solver tolerance must be positive");
  Solve fine = solve_once(domain, weight, params);
  CapacityResult res;
  res.value = fine.value;
  res.energy = fine.energy;
  res.stats = fine.stats;
  if (params.estimate_error) {
    // Discretization error from h -> 2h; truncation error from r_out -> 2 r_out at 2h.
    GridCapacityParams coarse = params;
    coarse.h = 2.0 * params.h;
    const double c_coarse = solve_once(domain, weight, coarse).value;
    GridCapacityParams wide = coarse;
    wide.r_out = 2.0 * params.r_out;
    const double c_wide = solve_once(domain, weight, wide).value;
    res.error_estimate = std::abs(fine.value - c_coarse) + std::abs(c_wide - c_coarse);
  }
  res.potential = std::move(fine.phi);
  return res;
}

double discrete_energy(const GridField& phi, const Weight& weight) {
  const Mesh& mesh = phi.mesh();
  std::vector<double> x(phi.size(), 0.0);
  for (std::size_t idx = 0; idx < phi.size(); ++idx) {
    if (mesh.tag(idx) != CellTag::exterior) continue;
    if (phi[idx] < -1e-9 || phi[idx] > 1.0 + 1e-9) {
      throw InputError("phi must lie in [0, 1], got " + std::to_string(phi[idx]));
    }
    x[idx] = phi[idx];
  }
  Operator op = assemble(mesh, weight);
  return operator_energy(op, x) * mesh.multiplicity();
}

double capacity_energy(const GridField& phi, const Weight& weight) {
  return discrete_energy(phi, weight) / (4.0 * std::numbers::pi);
}

SymmetrizedBound symmetrized_lower_bound(const GridField& phi) {
  const Mesh& mesh = phi.mesh();
  const GridField ext = extend_into_omega(phi);
  const auto star = rearrange(ext, std::make_pair(0.0, 1.0));
  const double volume = mesh.interior_measure();
  SymmetrizedBound out;
  out.profile = restrict_star(star, volume);
  out.radius = out.profile.r_min();
  const double r_end = out.profile.r_max();
  const double v_end = out.profile.values().back();
  // Beyond the box the rearranged function is continued as the monopole v_end * r_end / r.
  out.tail = v_end * v_end * r_end;
  out.value = out.profile.radial_energy(3, out.radius) / (4.0 * std::numbers::pi) + out.tail;
  out.decaying = v_end < 0.5;
  return out;
}

}  // namespace vpi
