#include "vpi/dimension.hpp"

#include <numbers>
#include <string>

#include "vpi/errors.hpp"

namespace vpi {

namespace {

void require_dimension(int n) {
  if (n < 3) {
    throw InputError("dimension must be >= 3, got " + std::to_string(n));
  }
}

}  // namespace

// Both constants follow the two-step recurrences in n, so only the
// half-integer values of Gamma ever appear and no special function is needed.
//   |S^{n-1}|: |S^1| = 2 pi, |S^2| = 4 pi, |S^{n+1}| = 2 pi |S^{n-1}| / n
//   |B^n|:     |B^1| = 2,    |B^2| = pi,   |B^n|     = 2 pi |B^{n-2}| / n
double sphere_area(int n) {
  require_dimension(n);
  double area = (n % 2 == 0) ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  for (int k = (n % 2 == 0) ? 2 : 3; k < n; k += 2) {
    area *= 2.0 * std::numbers::pi / k;
  }
  return area;
}

double ball_volume(int n) {
  require_dimension(n);
  double vol = (n % 2 == 0) ? std::numbers::pi : 2.0;
  for (int k = (n % 2 == 0) ? 4 : 3; k <= n; k += 2) {
    vol *= 2.0 * std::numbers::pi / k;
  }
  return vol;
}

Dimension::Dimension(int n) : n_(n), omega_(sphere_area(n)), beta_(ball_volume(n)) {}

}  // namespace vpi
