#include "vpi/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/measure.hpp"

namespace vpi {

namespace {

constexpr std::array<int, 3> kNormPowers{1, 2, 4};

double power_term(double v, int p) {
  const double a = std::abs(v);
  return p == 1 ? a : (p == 2 ? a * a : a * a * a * a);
}

}  // namespace

namespace {

/// Correctly rounded sum of a short list (Shewchuk partials, half-even final rounding).
double exact_round(const std::vector<double>& terms) {
  std::vector<double> partials;
  for (double x : terms) {
    std::size_t used = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace

double canonical_sum(std::vector<double> terms) {
  // Exact fixed-point accumulation: each term's 53-bit integer mantissa goes
  // into the bin of its binary exponent, so the total does not depend on the
  // order of the terms. Bins are carried 32 bits upward before they can overflow,
  // rounding to nearest so a bin keeps |value| < 2^31 and a negative total does
  // not ripple borrows into the top bins.
  constexpr int kOffset = 1126;  // -(exponent of the smallest subnormal mantissa unit)
  constexpr int kCarry = 32;
  constexpr std::size_t kBins = 2048 + kOffset + 2 * kCarry;
  std::vector<std::int64_t> bins(kBins, 0);
  auto normalize = [&] {
    for (std::size_t i = 0; i + kCarry < kBins; ++i) {
      const std::int64_t c = (bins[i] + (std::int64_t{1} << (kCarry - 1))) >> kCarry;
      bins[i] -= c * (std::int64_t{1} << kCarry);
      bins[i + kCarry] += c;
    }
  };
  std::size_t pending = 0;
  for (double x : terms) {
    if (!std::isfinite(x)) throw InputError("canonical_sum: non-finite term");
    if (x == 0.0) continue;
    int e = 0;
    const double f = std::frexp(x, &e);
    bins[static_cast<std::size_t>(e - 53 + kOffset)] += static_cast<std::int64_t>(std::ldexp(f, 53));
    if (++pending == 512) {
      normalize();
      pending = 0;
    }
  }
  normalize();
  std::vector<double> parts;
  for (std::size_t i = 0; i < kBins; ++i) {
    if (bins[i] != 0) parts.push_back(std::ldexp(static_cast<double>(bins[i]), static_cast<int>(i) - kOffset));
  }
  return exact_round(parts);
}

GridField extend_into_omega(const GridField& phi, double boundary_tol) {
  const Mesh& mesh = phi.mesh();
  constexpr double range_tol = 1e-9;
  for (std::size_t idx = 0; idx < phi.size(); ++idx) {
    if (mesh.tag(idx) != CellTag::exterior) continue;
    if (phi[idx] < -range_tol || phi[idx] > 1.0 + range_tol) {
      throw InputError("phi must lie in [0, 1] on exterior cells, got " + std::to_string(phi[idx]));
    }
  }
  for (const auto& link : mesh.links()) {
    // Linear extrapolation along the link axis from the cell and its exterior neighbour opposite the boundary.
    const auto c = mesh.coords(link.cell);
    const Axis& ax = mesh.axis(link.axis);
    const double d = std::abs(ax.center(c[link.axis] + link.dir) - ax.center(c[link.axis]));
    double boundary_value = phi[link.cell];
    const long opp = static_cast<long>(c[link.axis]) - link.dir;
    if (opp >= 0 && opp < static_cast<long>(ax.cells())) {
      const std::size_t o = link.dir > 0 ? link.cell - mesh.stride(link.axis)
                                         : link.cell + mesh.stride(link.axis);
      if (mesh.tag(o) == CellTag::exterior) {
        const double d_opp = std::abs(ax.center(c[link.axis]) - ax.center(static_cast<std::size_t>(opp)));
        boundary_value += link.theta * d * (phi[link.cell] - phi[o]) / d_opp;
      }
    }
    if (std::abs(boundary_value - 1.0) > boundary_tol) {
      throw InputError("phi must equal one on the boundary; extrapolated boundary value " +
                       std::to_string(boundary_value));
    }
  }
  GridField out = phi;
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    if (mesh.tag(idx) == CellTag::interior) out[idx] = 1.0;
  }
  return out;
}

RearrangementResult rearrange(const GridField& f, std::optional<std::pair<double, double>> clip) {
  const Mesh& mesh = f.mesh();
  const std::size_t n_cells = f.size();
  std::vector<double> vals = f.values();
  if (clip) {
    for (double& v : vals) v = std::clamp(v, clip->first, clip->second);
  }
  std::vector<std::size_t> order(n_cells);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

  RearrangementResult res;
  res.n = 3;
  res.values.resize(n_cells);
  res.measures.resize(n_cells);
  res.cumulative.resize(n_cells);
  double running = 0.0;
  for (std::size_t k = 0; k < n_cells; ++k) {
    res.values[k] = vals[order[k]];
    res.measures[k] = mesh.measure(order[k]);
    running += res.measures[k];
    res.cumulative[k] = running;
  }
  for (std::size_t k = 0; k < n_cells; ++k) {
    if (k + 1 == n_cells || res.values[k + 1] != res.values[k]) {
      res.level_map.push_back({res.values[k], res.cumulative[k]});
    }
  }

  for (std::size_t p = 0; p < kNormPowers.size(); ++p) {
    std::vector<double> orig(n_cells);
    std::vector<double> star(n_cells);
    for (std::size_t idx = 0; idx < n_cells; ++idx) {
      orig[idx] = power_term(vals[idx], kNormPowers[p]) * mesh.measure(idx);
    }
    for (std::size_t k = 0; k < n_cells; ++k) {
      star[k] = power_term(res.values[k], kNormPowers[p]) * res.measures[k];
    }
    res.norms.original[p] = canonical_sum(std::move(orig));
    res.norms.rearranged[p] = canonical_sum(std::move(star));
  }

  // Cells on the outer box faces (mirror planes excluded) should sit at inf f.
  const double inf = n_cells ? res.values.back() : 0.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(res.values.front() - inf));
  const auto d = mesh.dims();
  for (std::size_t idx = 0; idx < n_cells && !res.boundary_warning; ++idx) {
    const auto c = mesh.coords(idx);
    bool face = false;
    for (int a = 0; a < 3; ++a) {
      face = face || c[a] + 1 == d[a] || (c[a] == 0 && !mesh.axis(a).mirrored);
    }
    if (face && vals[idx] > inf + tol) res.boundary_warning = true;
  }

  // Profile on a uniform radial mesh; values interpolated in volume between cell midpoints.
  const double beta = ball_volume(3);
  const double r_end = std::cbrt(running / beta);
  const double dr = mesh.min_spacing();
  std::vector<double> radii;
  for (double r = 0.0; r < r_end - 0.5 * dr; r += dr) radii.push_back(r);
  radii.push_back(r_end);
  std::vector<double> mids(n_cells);
  for (std::size_t k = 0; k < n_cells; ++k) mids[k] = res.cumulative[k] - 0.5 * res.measures[k];
  std::vector<double> pv(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double v = beta * radii[j] * radii[j] * radii[j];
    const auto it = std::lower_bound(mids.begin(), mids.end(), v);
    if (it == mids.begin()) {
      pv[j] = res.values.front();
    } else if (it == mids.end()) {
      pv[j] = res.values.back();
    } else {
      const std::size_t k = static_cast<std::size_t>(it - mids.begin());
      const double t = (v - mids[k - 1]) / (mids[k] - mids[k - 1]);
      pv[j] = res.values[k - 1] + t * (res.values[k] - res.values[k - 1]);
    }
  }
  res.profile = RadialProfile(std::move(radii), std::move(pv));
  return res;
}

double RearrangementResult::value_at(double r) const {
  const double v = ball_volume(n) * std::pow(r, n);
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), v);
  if (it == cumulative.end()) return values.back();
  return values[static_cast<std::size_t>(it - cumulative.begin())];
}

double RearrangementResult::measure_at_least(double level) const {
  // values are non-increasing: count the prefix with value >= level.
  const auto it = std::partition_point(values.begin(), values.end(),
                                       [&](double v) { return v >= level; });
  const auto k = static_cast<std::size_t>(it - values.begin());
  return k == 0 ? 0.0 : cumulative[k - 1];
}

RadialProfile restrict_star(const RearrangementResult& result, double volume) {
  if (!(volume > 0.0)) throw InputError("volume must be positive");
  const double top = result.measure_at_least(1.0);
  if (top < volume * (1.0 - 1e-9)) {
    throw InputError("volume precondition violated: {phi~ >= 1} has measure " +
                     std::to_string(top) + " < V = " + std::to_string(volume));
  }
  const double radius = std::pow(volume / ball_volume(result.n), 1.0 / result.n);
  const auto& rr = result.profile.radii();
  const auto& vv = result.profile.values();
  std::vector<double> r{radius};
  std::vector<double> v{1.0};
  for (std::size_t j = 0; j < rr.size(); ++j) {
    if (rr[j] <= radius * (1.0 + 1e-12)) continue;
    r.push_back(rr[j]);
    v.push_back(std::min(1.0, vv[j]));
  }
  if (r.size() < 2) throw InputError("rearranged profile does not extend beyond R");
  return RadialProfile(std::move(r), std::move(v));
}

PolyaSzegoReport polya_szego_check(const GridField& f) {
  PolyaSzegoReport rep;
  rep.energy = dirichlet_energy(f);
  const auto star = rearrange(f);
  rep.energy_rearranged = star.profile.radial_energy(3, 0.0);
  const auto mis = star.norms.mismatch();
  for (int p = 0; p < 3; ++p) rep.lp_errors[p] = std::abs(mis[p]);
  return rep;
}

}  // namespace vpi
