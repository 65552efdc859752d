#pragma once

#include <cstddef>
#include <vector>

namespace vpi {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
GaussRule gauss_legendre(std::size_t n);

}  // namespace vpi
