#pragma once

#include <vector>

#include "vpi/conformal_factor.hpp"
#include "vpi/domain.hpp"
#include "vpi/vec3.hpp"

namespace vpi {

struct ResidualSample {
  std::vector<double> point;
  double value = 0.0;
};

/// d_nu u + (n-2)/2 * h0 * u on boundary samples. For n = 3 the normal and
/// h0 come from central differences of the level function with step h; in
/// other dimensions the domain must be a centred ball and u radial.
struct MinimalityResidual {
  std::vector<ResidualSample> samples;
  double sup_norm() const;
};

MinimalityResidual minimality_residual(const ConformalFactor& u, const DomainSpec& domain, double h);

struct SampleCheck {
  bool ok = true;
  double worst = 0.0;  // most negative -Laplacian u (superharmonic) or min u (u >= 1)
  std::vector<double> worst_point;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
};

/// -Laplacian u >= -10 h^2 at exterior samples: a lattice of spacing
/// max(h, 4 rho / 64) over [-2 rho, 2 rho]^3 (rho the circumradius of Omega),
/// plus spheres out to 64 rho. Lattice-sampled factors are allowed the change of
/// their finite-difference Laplacian between stencil widths s and 2s.
SampleCheck check_superharmonic(const ConformalFactor& u, const DomainSpec& domain, double h);

/// min u >= 1 - 1e-9 over the same samples.
SampleCheck check_u_ge_one(const ConformalFactor& u, const DomainSpec& domain, double h);

struct MeanConvexity {
  bool ok = true;
  double min_h0 = 0.0;
};

/// h0 > 0 at every boundary sample.
MeanConvexity mean_convex(const DomainSpec& domain, double h);

}  // namespace vpi
