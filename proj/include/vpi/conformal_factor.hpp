#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vpi/vec3.hpp"

namespace vpi {

/// A point source 1 / |x - center|^{n-2} with positive charge.
struct Pole {
  std::vector<double> center;
  double charge = 0.0;
};

/// Node samples of a factor on a uniform 3-d lattice. Node (i, j, k) sits at
/// origin + spacing * (i, j, k); values are row-major with k fastest.
struct SampleLattice {
  Vec3 origin{};
  double spacing = 0.0;
  std::array<std::size_t, 3> dims{};
  std::vector<double> values;

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * dims[1] + j) * dims[2] + k;
  }
};

/// Conformal factor u of a metric u^{4/(n-2)} delta on an exterior domain.
///
/// Closed-form families (Schwarzschild, multipole) carry exact gradients and
/// Laplacians. Lattice-sampled factors are trilinear inside the lattice,
/// continue as 1 + c/|x| outside it (c fitted on the lattice boundary), and
/// are differentiated with second-order central differences at the lattice
/// spacing.
class ConformalFactor {
 public:
  enum class Family { schwarzschild, multipole, grid };

  /// u = 1 + m / (2 |x|^{n-2}); m > 0.
  static ConformalFactor schwarzschild(int n, double mass);
  /// u = 1 + sum_i c_i / |x - p_i|^{n-2}; every c_i > 0. An empty list gives u = 1.
  static ConformalFactor multipole(int n, std::vector<Pole> poles);
  static ConformalFactor unit(int n) { return multipole(n, {}); }
  /// Lattice samples (n = 3 only).
  static ConformalFactor grid(SampleLattice lattice);
  /// Samples `fn` at the nodes of a lattice covering [lo, hi]^3 with the given spacing.
  static ConformalFactor sampled(const std::function<double(const Vec3&)>& fn, double lo,
                                 double hi, double spacing);

  int n() const noexcept { return n_; }
  Family family() const noexcept;
  std::string family_name() const;

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  double laplacian(std::span<const double> x) const;

  double value(const Vec3& x) const { return value(std::span<const double>(x)); }
  Vec3 gradient(const Vec3& x) const {
    Vec3 g{};
    gradient(std::span<const double>(x), std::span<double>(g));
    return g;
  }
  double laplacian(const Vec3& x) const { return laplacian(std::span<const double>(x)); }

  /// True when u depends on |x| only.
  bool is_radial() const;
  /// u and du/dr along a ray; requires is_radial().
  double radial_value(double r) const;
  double radial_derivative(double r) const;

  /// True when u(x) is unchanged by x_axis -> -x_axis.
  bool mirror_symmetric(int axis) const;

  /// Coefficient c of the leading c / |x|^{n-2} term at infinity.
  double far_field_charge() const;

  const std::vector<Pole>& poles() const;
  double schwarzschild_mass() const;
  const SampleLattice& lattice() const;

 private:
  struct Schwarzschild {
    double mass;
  };
  struct Multipole {
    std::vector<Pole> poles;
  };
  struct Grid {
    SampleLattice lattice;
    double far_charge;
  };

  ConformalFactor(int n, std::variant<Schwarzschild, Multipole, Grid> rep)
      : n_(n), rep_(std::move(rep)) {}

  double grid_value(const Grid& g, const Vec3& x) const;

  int n_;
  std::variant<Schwarzschild, Multipole, Grid> rep_;
};

}  // namespace vpi
