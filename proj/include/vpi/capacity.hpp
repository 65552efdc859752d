#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <variant>

#include "vpi/conformal_factor.hpp"
#include "vpi/domain.hpp"
#include "vpi/grid.hpp"
#include "vpi/radial_profile.hpp"

namespace vpi {

/// Positive weight w in the energy  integral of w |grad phi|^2 dV_0.
/// For g = u^{4/(n-2)} delta the g-energy of phi equals the flat energy with w = u^2.
class Weight {
 public:
  static Weight unit() { return Weight(); }
  static Weight conformal_squared(ConformalFactor u);
  static Weight function(std::function<double(const Vec3&)> fn, std::array<bool, 3> mirror = {});

  double operator()(const Vec3& x) const;
  bool is_unit() const noexcept { return kind_ == Kind::unit; }
  bool mirror_symmetric(int axis) const;

 private:
  enum class Kind { unit, conformal, function };
  Weight() = default;

  Kind kind_ = Kind::unit;
  std::optional<ConformalFactor> factor_;
  std::function<double(const Vec3&)> fn_;
  std::array<bool, 3> mirror_{};
};

struct SolverStats {
  std::size_t iterations = 0;
  double residual = 0.0;  // final relative residual
  std::size_t unknowns = 0;
  bool converged = false;
};

struct CapacityResult {
  double value = 0.0;           // energy / ((n-2) omega_{n-1})
  double energy = 0.0;          // raw Dirichlet integral
  double error_estimate = 0.0;
  std::variant<RadialProfile, GridField> potential;
  SolverStats stats;
};

/// Flat capacity of the sphere of radius R: R^{n-2}.
double flat_capacity_sphere(int n, double radius);

/// Capacity of the sphere |x| = r_h in u^{4/(n-2)} delta for radial u:
/// 1 / integral_0^{s_h} ds / u^2 in the variable s = r^{2-n}. Adaptive
/// Gauss-Kronrod up to r = 1e3 r_h, analytic tail beyond with u = 1 + c s
/// matched at the split radius. The potential is returned on a geometric mesh of 2048
/// radii over [r_h, 1e4 r_h].
CapacityResult radial_weighted_capacity(const ConformalFactor& u, double r_h);

enum class Preconditioner { jacobi, multigrid };

struct GridCapacityParams {
  double h = 1.0 / 24.0;
  double r_out = 16.0;
  double grading = 1.5;
  double tolerance = 1e-10;         // relative residual of the linear solve
  double iteration_factor = 20.0;    // cap = factor * (cells along the longest axis)
  double failure_residual = 1e-6;    // residual at the cap above which the solve fails
  Preconditioner preconditioner = Preconditioner::multigrid;
  bool use_symmetry = true;
  bool estimate_error = true;
};

/// Capacity of the boundary of Omega (n = 3) with weight w on a graded mesh.
///
/// Solves div(w grad phi) = 0 by preconditioned conjugate gradients with
/// phi = 1 on the boundary (imposed at the level-set crossing of every
/// exterior/interior link) and the monopole Robin condition
/// d_nu phi + (x . nu) / (|x|^2 sqrt(w)) phi = 0 on the outer box, exact for
/// w = (1 + c/r)^2. The capacity is the
/// discrete energy of the solution, including the Robin far-field term. The
/// error estimate adds the changes under h -> 2h and r_out -> 2 r_out.
CapacityResult grid_capacity(const DomainSpec& domain, const Weight& weight,
                             const GridCapacityParams& params = {});

/// Normalized energy (1/((n-2) omega)) * integral of w |grad phi|^2 over the
/// exterior cells of phi's mesh, in the same discretization the grid solver
/// minimizes (boundary links at phi = 1, Robin far-field term).
double capacity_energy(const GridField& phi, const Weight& weight);

/// The discretization the grid solver uses, exposed for diagnostics.
double discrete_energy(const GridField& phi, const Weight& weight);

struct SymmetrizedBound {
  double value = 0.0;    // normalized radial energy of phi* on r >= R plus the monopole tail
  double radius = 0.0;   // R = (V_cells / beta_3)^{1/3}
  double tail = 0.0;     // normalized tail contribution beyond the rearranged profile
  bool decaying = true;  // false when phi does not decay on the mesh; the bound is then not comparable
  RadialProfile profile;
};

/// Extends phi by 1 into Omega, rearranges, restricts to r >= R and returns the
/// radial energy of the restriction: a lower bound for the flat energy of phi.
SymmetrizedBound symmetrized_lower_bound(const GridField& phi);

}  // namespace vpi
