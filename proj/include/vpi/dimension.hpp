#pragma once

namespace vpi {

/// Area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2). Requires n >= 3.
double sphere_area(int n);

/// Volume of the unit n-ball, pi^{n/2} / Gamma(n/2 + 1). Requires n >= 3.
double ball_volume(int n);

/// Ambient dimension together with its sphere-area and ball-volume constants.
class Dimension {
 public:
  explicit Dimension(int n);

  int n() const noexcept { return n_; }
  double omega() const noexcept { return omega_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const Dimension&, const Dimension&) = default;

 private:
  int n_;
  double omega_;
  double beta_;
};

}  // namespace vpi
