#include "vpi/grid.hpp"

#include <algorithm>
#include <cmath>

#include "vpi/errors.hpp"

namespace vpi {

namespace {

// Edges beyond `start` (exclusive) growing like h * (x / ref)^p up to `outer`.
std::vector<double> grow_edges(double start, double ref, double h, double p, double outer) {
  std::vector<double> out;
  double x = start;
  while (x < outer) {
    const double w = h * std::pow(std::max(x, ref) / ref, p);
    if (x + 1.5 * w >= outer) {
      out.push_back(outer);
      break;
    }
    x += w;
    out.push_back(x);
  }
  return out;
}

Axis graded_axis(double lo, double hi, const GradedParams& p, bool mirrored) {
  const double margin = p.core_margin * (hi - lo) + 2.0 * p.h;
  const double core_hi = std::max(p.h, std::ceil((hi + margin) / p.h) * p.h);
  const double core_lo = mirrored ? 0.0 : std::min(-p.h, std::floor((lo - margin) / p.h) * p.h);
  if (p.r_out <= core_hi + p.h || p.r_out <= -core_lo + p.h) {
    throw InputError("r_out must exceed the uniform core around the domain");
  }
  Axis ax;
  ax.mirrored = mirrored;
  if (!mirrored) {
    auto below = grow_edges(-core_lo, -core_lo, p.h, p.grading, p.r_out);
    for (auto it = below.rbegin(); it != below.rend(); ++it) ax.edges.push_back(-*it);
  }
  const auto core_cells = static_cast<long>(std::llround((core_hi - core_lo) / p.h));
  for (long i = 0; i <= core_cells; ++i) ax.edges.push_back(core_lo + double(i) * p.h);
  for (double e : grow_edges(core_hi, core_hi, p.h, p.grading, p.r_out)) ax.edges.push_back(e);
  return ax;
}

}  // namespace

Mesh::Mesh(std::array<Axis, 3> axes, std::optional<DomainSpec> domain)
    : axes_(std::move(axes)), domain_(std::move(domain)) {
  for (const auto& a : axes_) {
    if (a.cells() < 3) throw InputError("mesh needs at least 3 cells per axis");
    if (a.mirrored) multiplicity_ *= 2.0;
  }
  ny_ = axes_[1].cells();
  nz_ = axes_[2].cells();
  if (domain_ && domain_->n() != 3) throw InputError("Cartesian meshes are 3-dimensional");
  classify();
}

std::shared_ptr<const Mesh> Mesh::uniform(const Vec3& lo, const Vec3& hi, double h,
                                          std::optional<DomainSpec> domain) {
  if (!(h > 0.0)) throw InputError("grid spacing must be positive");
  std::array<Axis, 3> axes;
  for (int a = 0; a < 3; ++a) {
    if (!(hi[a] > lo[a])) throw InputError("grid box is empty");
    const auto cells = static_cast<long>(std::ceil((hi[a] - lo[a]) / h - 1e-9));
    for (long i = 0; i <= cells; ++i) axes[a].edges.push_back(lo[a] + double(i) * h);
  }
  return std::shared_ptr<const Mesh>(new Mesh(std::move(axes), std::move(domain)));
}

std::shared_ptr<const Mesh> Mesh::tensor(std::array<Axis, 3> axes, std::optional<DomainSpec> domain) {
  for (const auto& a : axes) {
    if (a.edges.size() < 2) throw InputError("mesh axis has no cells");
    for (std::size_t i = 1; i < a.edges.size(); ++i) {
      if (!(a.edges[i] > a.edges[i - 1])) throw InputError("mesh edges must be strictly increasing");
    }
    if (a.mirrored && a.edges.front() != 0.0) throw InputError("a mirrored axis must start at 0");
  }
  return std::shared_ptr<const Mesh>(new Mesh(std::move(axes), std::move(domain)));
}

std::shared_ptr<const Mesh> Mesh::graded(const DomainSpec& domain, const GradedParams& params) {
  if (!(params.h > 0.0)) throw InputError("grid spacing must be positive");
  if (domain.n() != 3) throw InputError("Cartesian meshes are 3-dimensional");
  const auto [lo, hi] = domain.bounding_box();
  for (int a = 0; a < 3; ++a) {
    if (std::max(std::abs(lo[a]), std::abs(hi[a])) >= params.r_out) {
      throw InputError("domain is not contained in the grid extents");
    }
  }
  std::array<Axis, 3> axes;
  for (int a = 0; a < 3; ++a) axes[a] = graded_axis(lo[a], hi[a], params, params.mirror[a]);
  return std::shared_ptr<const Mesh>(new Mesh(std::move(axes), domain));
}

void Mesh::classify() {
  const auto d = dims();
  tags_.assign(d[0] * d[1] * d[2], CellTag::exterior);
  if (!domain_) return;
  for (std::size_t idx = 0; idx < tags_.size(); ++idx) {
    if (domain_->contains(center(idx))) tags_[idx] = CellTag::interior;
  }
  for (std::size_t idx = 0; idx < tags_.size(); ++idx) {
    if (tags_[idx] != CellTag::exterior) continue;
    const auto c = coords(idx);
    for (int a = 0; a < 3; ++a) {
      for (int dir : {-1, 1}) {
        if (dir < 0 && c[a] == 0) continue;
        if (dir > 0 && c[a] + 1 == d[a]) continue;
        const std::size_t nb = dir > 0 ? idx + stride(a) : idx - stride(a);
        if (tags_[nb] != CellTag::interior) continue;
        const Vec3 x0 = center(idx);
        const Vec3 x1 = center(nb);
        // Bisection on the segment; level(x0) >= 0 > level(x1).
        double t0 = 0.0;
        double t1 = 1.0;
        for (int it = 0; it < 60; ++it) {
          const double tm = 0.5 * (t0 + t1);
          if (domain_->level(x0 + tm * (x1 - x0)) < 0.0) {
            t1 = tm;
          } else {
            t0 = tm;
          }
        }
        const double theta = 0.5 * (t0 + t1);
        links_.push_back({idx, a, dir, theta, x0 + theta * (x1 - x0)});
      }
    }
  }
}

Vec3 Mesh::center(std::size_t idx) const {
  const auto c = coords(idx);
  return {axes_[0].center(c[0]), axes_[1].center(c[1]), axes_[2].center(c[2])};
}

double Mesh::volume(std::size_t idx) const {
  const auto c = coords(idx);
  return axes_[0].width(c[0]) * axes_[1].width(c[1]) * axes_[2].width(c[2]);
}

bool Mesh::is_uniform() const {
  const double h = axes_[0].width(0);
  for (const auto& a : axes_) {
    for (std::size_t i = 0; i < a.cells(); ++i) {
      if (std::abs(a.width(i) - h) > 1e-12 * h) return false;
    }
  }
  return true;
}

double Mesh::min_spacing() const {
  double h = axes_[0].width(0);
  for (const auto& a : axes_) {
    for (std::size_t i = 0; i < a.cells(); ++i) h = std::min(h, a.width(i));
  }
  return h;
}

double Mesh::interior_measure() const {
  double v = 0.0;
  for (std::size_t idx = 0; idx < tags_.size(); ++idx) {
    if (tags_[idx] == CellTag::interior) v += measure(idx);
  }
  return v;
}

GridField::GridField(std::shared_ptr<const Mesh> mesh, double fill)
    : mesh_(std::move(mesh)), values_(mesh_->size(), fill) {}

GridField::GridField(std::shared_ptr<const Mesh> mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (values_.size() != mesh_->size()) throw InputError("field size does not match its mesh");
}

GridField GridField::sample(std::shared_ptr<const Mesh> mesh,
                            const std::function<double(const Vec3&)>& fn) {
  GridField f(mesh);
  for (std::size_t idx = 0; idx < f.size(); ++idx) f[idx] = fn(mesh->center(idx));
  return f;
}

}  // namespace vpi
