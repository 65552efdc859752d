#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "vpi/grid.hpp"
#include "vpi/radial_profile.hpp"

namespace vpi {

/// One recorded level K and the measure of {f >= K}.
struct LevelVolume {
  double level = 0.0;
  double volume = 0.0;
};

/// L^p norms (p = 1, 2, 4) before and after rearrangement.
struct NormCheck {
  std::array<double, 3> original{};
  std::array<double, 3> rearranged{};
  std::array<double, 3> mismatch() const {
    return {original[0] - rearranged[0], original[1] - rearranged[1], original[2] - rearranged[2]};
  }
};

/// Decreasing rearrangement of a cell field. The cell values sorted in
/// decreasing order, each carrying its cell measure, *are* the rearrangement:
/// the k-th value occupies the shell between the balls of volumes
/// cumulative[k-1] and cumulative[k]. `profile` is the same function sampled on a
/// radial mesh of spacing h_min for 1-d quadrature.
struct RearrangementResult {
  int n = 3;
  std::vector<double> values;      // non-increasing
  std::vector<double> measures;    // cell measure of each value
  std::vector<double> cumulative;  // running sum of measures
  std::vector<LevelVolume> level_map;
  NormCheck norms;
  RadialProfile profile;
  bool boundary_warning = false;  // box-face cells above inf f: the box may cut the support

  /// Step-function value of u* at radius r.
  double value_at(double r) const;
  /// Measure of {u* >= K}.
  double measure_at_least(double level) const;
  double total_measure() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/// phi~ = 1 on Omega cells, phi elsewhere. Requires phi in [0, 1] on exterior
/// cells and phi extrapolated to every boundary link within `boundary_tol` of 1.
GridField extend_into_omega(const GridField& phi, double boundary_tol = 0.1);

/// Decreasing rearrangement; ties keep linear cell order (stable sort).
RearrangementResult rearrange(const GridField& f,
                              std::optional<std::pair<double, double>> clip = std::nullopt);

/// phi* on r >= R = (V/beta_n)^{1/n}, with phi*(R) = 1.
RadialProfile restrict_star(const RearrangementResult& result, double volume);

struct PolyaSzegoReport {
  double energy = 0.0;           // Dirichlet energy of f on its mesh
  double energy_rearranged = 0.0;  // radial energy of f*
  std::array<double, 3> lp_errors{};  // p = 1, 2, 4
  double excess() const { return energy_rearranged - energy; }
};

PolyaSzegoReport polya_szego_check(const GridField& f);

/// Correctly rounded sum of the terms: equal multisets give bit-identical sums.
double canonical_sum(std::vector<double> terms);

}  // namespace vpi
