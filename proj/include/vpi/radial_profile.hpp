#pragma once

#include <vector>

namespace vpi {

/// Piecewise-linear function of the radius on [r.front(), r.back()].
class RadialProfile {
 public:
  RadialProfile() = default;
  /// r strictly increasing, r[0] >= 0, both arrays the same length >= 2.
  RadialProfile(std::vector<double> r, std::vector<double> values);

  const std::vector<double>& radii() const noexcept { return r_; }
  const std::vector<double>& values() const noexcept { return v_; }
  std::size_t size() const noexcept { return r_.size(); }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }

  /// Linear interpolation; clamps to the end values outside the mesh.
  double operator()(double r) const;

  /// integral of (dv/dr)^2 * omega * r^{n-1} dr over [from, r_max], exact for the
  /// piecewise-linear interpolant.
  double radial_energy(int n, double from) const;

  bool non_increasing() const;

 private:
  std::vector<double> r_;
  std::vector<double> v_;
};

/// Geometric mesh of `points` radii from r_min to r_min * span.
std::vector<double> geometric_radii(double r_min, double span, std::size_t points);

}  // namespace vpi
