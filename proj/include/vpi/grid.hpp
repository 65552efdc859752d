#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "vpi/domain.hpp"
#include "vpi/vec3.hpp"

namespace vpi {

enum class CellTag : std::uint8_t { exterior = 0, interior = 1 };

/// One tensor-product axis of cell edges. A mirrored axis starts at 0 and
/// stands for the reflected copy on the negative side as well.
struct Axis {
  std::vector<double> edges;
  bool mirrored = false;

  std::size_t cells() const { return edges.size() - 1; }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
};

/// Face between an exterior cell and its interior neighbour in direction `dir`
/// along `axis`, with the level-set crossing at fraction `theta` of the
/// centre-to-centre distance, measured from the exterior cell.
struct BoundaryLink {
  std::size_t cell = 0;
  int axis = 0;
  int dir = 1;
  double theta = 1.0;
  Vec3 point{};
};

struct GradedParams {
  double h = 1.0 / 24.0;  // spacing of the uniform core
  double r_out = 16.0;    // half-width of the outer box
  double grading = 1.5;   // width(x) = h * (|x| / core)^grading outside the core
  double core_margin = 0.1;  // relative padding of the core around Omega's bounding box
  std::array<bool, 3> mirror{};
};

/// Cell-centred 3-d tensor-product mesh with the cell mask of an optional domain.
class Mesh {
 public:
  /// Uniform cells of width h covering [lo, hi] (rounded outward to whole cells).
  static std::shared_ptr<const Mesh> uniform(const Vec3& lo, const Vec3& hi, double h,
                                             std::optional<DomainSpec> domain = std::nullopt);
  /// Arbitrary tensor-product axes (strictly increasing edges, >= 3 cells each).
  static std::shared_ptr<const Mesh> tensor(std::array<Axis, 3> axes,
                                            std::optional<DomainSpec> domain = std::nullopt);
  /// Uniform core around Omega, then cells growing outward to the box [-r_out, r_out]^3.
  static std::shared_ptr<const Mesh> graded(const DomainSpec& domain, const GradedParams& params);

  const Axis& axis(int a) const { return axes_[a]; }
  std::array<std::size_t, 3> dims() const {
    return {axes_[0].cells(), axes_[1].cells(), axes_[2].cells()};
  }
  std::size_t size() const { return tags_.size(); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * ny_ + j) * nz_ + k;
  }
  std::array<std::size_t, 3> coords(std::size_t idx) const {
    return {idx / (ny_ * nz_), (idx / nz_) % ny_, idx % nz_};
  }
  std::size_t stride(int a) const { return a == 0 ? ny_ * nz_ : (a == 1 ? nz_ : 1); }

  Vec3 center(std::size_t idx) const;
  /// Geometric cell volume (one copy, before mirror multiplicity).
  double volume(std::size_t idx) const;
  /// Number of mirror copies each stored cell stands for (1, 2, 4 or 8).
  double multiplicity() const { return multiplicity_; }
  /// Volume counting mirror copies.
  double measure(std::size_t idx) const { return volume(idx) * multiplicity_; }

  CellTag tag(std::size_t idx) const { return tags_[idx]; }
  const std::vector<CellTag>& tags() const { return tags_; }
  const std::vector<BoundaryLink>& links() const { return links_; }
  const std::optional<DomainSpec>& domain() const { return domain_; }

  bool is_uniform() const;
  double min_spacing() const;
  /// Measure of the interior-tagged cells.
  double interior_measure() const;
  /// Outer box half-widths (upper edge of every axis).
  Vec3 upper() const { return {axes_[0].edges.back(), axes_[1].edges.back(), axes_[2].edges.back()}; }
  Vec3 lower() const {
    return {axes_[0].edges.front(), axes_[1].edges.front(), axes_[2].edges.front()};
  }

 private:
  Mesh(std::array<Axis, 3> axes, std::optional<DomainSpec> domain);
  void classify();

  std::array<Axis, 3> axes_;
  std::size_t ny_ = 0;
  std::size_t nz_ = 0;
  double multiplicity_ = 1.0;
  std::optional<DomainSpec> domain_;
  std::vector<CellTag> tags_;
  std::vector<BoundaryLink> links_;
};

/// Scalar values on the cells of a mesh.
class GridField {
 public:
  GridField() = default;
  explicit GridField(std::shared_ptr<const Mesh> mesh, double fill = 0.0);
  GridField(std::shared_ptr<const Mesh> mesh, std::vector<double> values);
  static GridField sample(std::shared_ptr<const Mesh> mesh,
                          const std::function<double(const Vec3&)>& fn);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> values_;
};

}  // namespace vpi
