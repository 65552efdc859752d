#include "vpi/radial_profile.hpp"

#include <algorithm>
#include <cmath>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"

namespace vpi {

RadialProfile::RadialProfile(std::vector<double> r, std::vector<double> values)
    : r_(std::move(r)), v_(std::move(values)) {
  if (r_.size() != v_.size()) throw InputError("radial profile arrays differ in length");
  if (r_.size() < 2) throw InputError("radial profile needs at least two points");
  if (r_.front() < 0.0) throw InputError("radial profile must start at r >= 0");
  for (std::size_t i = 1; i < r_.size(); ++i) {
    if (!(r_[i] > r_[i - 1])) throw InputError("radial profile radii must be strictly increasing");
  }
}

double RadialProfile::operator()(double r) const {
  if (r <= r_.front()) return v_.front();
  if (r >= r_.back()) return v_.back();
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin());
  const double t = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
  return v_[i - 1] + t * (v_[i] - v_[i - 1]);
}

double RadialProfile::radial_energy(int n, double from) const {
  const double omega = sphere_area(n);
  double e = 0.0;
  for (std::size_t i = 1; i < r_.size(); ++i) {
    const double a = std::max(r_[i - 1], from);
    const double b = r_[i];
    if (b <= a) continue;
    const double slope = (v_[i] - v_[i - 1]) / (r_[i] - r_[i - 1]);
    e += slope * slope * (std::pow(b, n) - std::pow(a, n)) / n;
  }
  return omega * e;
}

bool RadialProfile::non_increasing() const {
  return std::adjacent_find(v_.begin(), v_.end(), std::less<>()) == v_.end();
}

std::vector<double> geometric_radii(double r_min, double span, std::size_t points) {
  if (!(r_min > 0.0) || !(span > 1.0) || points < 2) throw InputError("invalid geometric mesh");
  std::vector<double> r(points);
  const double q = std::pow(span, 1.0 / double(points - 1));
  for (std::size_t i = 0; i < points; ++i) r[i] = r_min * std::pow(q, double(i));
  r.back() = r_min * span;
  return r;
}

}  // namespace vpi
