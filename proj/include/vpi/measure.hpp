#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "vpi/conformal_factor.hpp"
#include "vpi/domain.hpp"
#include "vpi/grid.hpp"
#include "vpi/vec3.hpp"

namespace vpi {

struct VolumeEstimate {
  double value = 0.0;   // Richardson-extrapolated volume
  double error = 0.0;   // |fine - coarse|
  double coarse = 0.0;  // volume at spacing h
  double fine = 0.0;    // volume at spacing h/2
};

/// Euclidean volume of Omega from cell volume fractions at spacing h and h/2,
/// combined by one Richardson step (second order). Each cell crossed by the
/// boundary contributes the exact volume of the cube cut by the tangent plane
/// of the level set at its centre. Centred balls in any dimension return the
/// closed form with zero error.
VolumeEstimate euclidean_volume(const DomainSpec& domain, double h,
                                std::optional<std::pair<Vec3, Vec3>> extents = std::nullopt);

/// Fraction of the cube [0,1]^3 with a . y < t, for a_i >= 0.
double cube_fraction_below_plane(Vec3 a, double t);

/// Second-order gradient. Derivatives use only neighbours with the same cell
/// tag; three-point central stencils in the interior of each region and
/// three-point one-sided stencils at tag changes and box faces.
std::array<GridField, 3> gradient(const GridField& field);

/// sum over exterior cells of weight * |grad field|^2 * cell measure (midpoint rule).
double dirichlet_energy(const GridField& field, const GridField* weight = nullptr);

/// Average of principal curvatures of the boundary at x (outward normal):
/// closed form for balls and ellipsoids, level-set divergence otherwise.
double boundary_mean_curvature(const DomainSpec& domain, const Vec3& x, double step = 1e-3);

/// (1/2) div(grad phi / |grad phi|) by central differences with the given step.
double level_set_mean_curvature(const DomainSpec& domain, const Vec3& x, double step);

/// Outward unit normal from the level-set gradient.
Vec3 level_set_normal(const DomainSpec& domain, const Vec3& x, double step);

struct BoundarySample {
  Vec3 point{};
  Vec3 normal{};
  double area = 0.0;  // Euclidean area weight
};

/// Quadrature points on the boundary with spacing about h: parametric
/// product rules for balls and ellipsoids (union of balls: the visible parts of
/// each sphere), a smoothed-delta shell projected onto the surface for level sets.
std::vector<BoundarySample> boundary_samples(const DomainSpec& domain, double h);

/// Area of the boundary measured in g = u^{4/(n-2)} delta: the Euclidean area
/// element weighted by u^{2(n-1)/(n-2)}.
double boundary_area_in_g(const DomainSpec& domain, const ConformalFactor& u, double h);

}  // namespace vpi
