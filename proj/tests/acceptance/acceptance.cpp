// Acceptance checks AC1..AC8. With no arguments every criterion runs and
// prints one line; `acceptance AC4` runs a single criterion. Exit status is 0
// only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vpi/capacity.hpp"
#include "vpi/dimension.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/harness/report.hpp"
#include "vpi/harness/runner.hpp"
#include "vpi/harness/scenario.hpp"
#include "vpi/hypotheses.hpp"
#include "vpi/mass.hpp"
#include "vpi/measure.hpp"
#include "vpi/symmetrize.hpp"

using namespace vpi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// First-order tolerance for rearranging cell values: halves with h.
double rearrangement_tol(double h) { return 2.0 * h; }

fs::path scenario_dir() { return fs::path(VPI_SCENARIO_DIR); }

// Schwarzschild equality chain on the radial path.
void ac1(Outcome& o) {
  double worst_cg = 0.0, worst_flat = 0.0, worst_rhs = 0.0, slowest = 0.0;
  for (int n : {3, 4, 5, 7}) {
    for (double m : {0.5, 1.0, 2.0, 7.0}) {
      const auto t0 = Clock::now();
      const double rh = horizon_radius(n, m);
      const auto u = ConformalFactor::schwarzschild(n, m);
      const double cg = radial_weighted_capacity(u, rh).value;
      const double cf = flat_capacity_sphere(n, rh);
      const double rhs = rhs_volumetric(Dimension(n), euclidean_volume(DomainSpec::ball(n, rh), rh / 24.0).value);
      slowest = std::max(slowest, seconds_since(t0));
      worst_cg = std::max(worst_cg, rel(cg, m));
      worst_flat = std::max(worst_flat, rel(cf, std::pow(rh, n - 2)));
      worst_rhs = std::max(worst_rhs, rel(rhs, m / 2.0));
    }
  }
  o.detail << "16 cases; max rel err C_g " << worst_cg << ", C_flat " << worst_flat << ", rhs_vol " << worst_rhs
           << "; slowest case " << slowest << " s";
  o.require(worst_cg <= 1e-6, "C_g = m");
  o.require(worst_flat <= 1e-8, "C_flat = r_h^{n-2}");
  o.require(worst_rhs <= 1e-12, "rhs_vol = m/2");
  o.require(slowest < 1.0, "runtime");
}

GridCapacityParams grid(double h, double r_out = 16.0) {
  GridCapacityParams p;
  p.h = h;
  p.r_out = r_out;
  p.estimate_error = false;
  return p;
}

// Flat grid capacity of the unit ball converges.
void ac2(Outcome& o) {
  const auto ball = DomainSpec::ball(3, 1.0);
  const double c24 = grid_capacity(ball, Weight::unit(), grid(1.0 / 24.0)).value;
  const auto t0 = Clock::now();
  const double c48 = grid_capacity(ball, Weight::unit(), grid(1.0 / 48.0)).value;
  const double t48 = seconds_since(t0);
  const double e24 = std::abs(c24 - 1.0), e48 = std::abs(c48 - 1.0);
  o.detail << "C(1/24) = " << c24 << ", C(1/48) = " << c48 << ", error ratio " << e24 / e48 << ", fine level "
           << t48 << " s";
  o.require(e24 <= 0.03, "within 3% at h = 1/24");
  o.require(e24 >= 1.7 * e48, "error ratio >= 1.7");
  o.require(t48 < 60.0, "runtime");
}

// Weighted grid capacity of the Schwarzschild horizon.
void ac3(Outcome& o) {
  const double m = 2.0;
  const auto u = ConformalFactor::schwarzschild(3, m);
  const double rh = horizon_radius(3, m);
  const auto t0 = Clock::now();
  const double cg = grid_capacity(DomainSpec::ball(3, rh), Weight::conformal_squared(u), grid(1.0 / 24.0)).value;
  const double t = seconds_since(t0);
  const double radial = radial_weighted_capacity(u, rh).value;
  o.detail << "grid C_g = " << cg << ", radial C_g = " << radial << ", " << t << " s";
  o.require(rel(cg, m) <= 0.03, "within 3% of m");
  o.require(rel(cg, radial) <= 0.03, "agrees with the radial path");
  o.require(t < 60.0, "runtime");
}

/// Sum of one to three Gaussian bumps, drawn from a seeded generator.
std::function<double(const Vec3&)> bump_field(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> centre(-0.3, 0.3), width(0.1, 0.22), amp(0.5, 1.0);
  std::uniform_int_distribution<int> count(1, 3);
  struct Bump {
    Vec3 c;
    double s, a;
  };
  std::vector<Bump> bumps(count(rng));
  for (auto& b : bumps) b = {{centre(rng), centre(rng), centre(rng)}, width(rng), amp(rng)};
  return [bumps](const Vec3& x) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const Vec3 d = x - b.c;
      v += b.a * std::exp(-dot(d, d) / (2.0 * b.s * b.s));
    }
    return v;
  };
}

// Polya-Szego on seeded smooth fields.
void ac4(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240611);
  std::vector<std::function<double(const Vec3&)>> fields;
  for (int i = 0; i < 20; ++i) fields.push_back(bump_field(rng));
  bool exact = true;
  for (double h : {1.0 / 24.0, 1.0 / 48.0}) {
    const auto mesh = Mesh::uniform({-1.25, -1.25, -1.25}, {1.25, 1.25, 1.25}, h);
    double worst = -INFINITY;
    int violations = 0;
    for (const auto& fn : fields) {
      const auto rep = polya_szego_check(GridField::sample(mesh, fn));
      for (double e : rep.lp_errors) exact = exact && e == 0.0;
      worst = std::max(worst, rep.excess());
      if (rep.excess() > rearrangement_tol(h)) ++violations;
    }
    o.detail << "h = 1/" << std::lround(1.0 / h) << ": max E(f*) - E(f) = " << worst << " (tol " << rearrangement_tol(h)
             << "); ";
    o.require(violations == 0, "energy excess within tol at h = 1/" + std::to_string(std::lround(1.0 / h)));
  }
  const double t = seconds_since(t0);
  o.detail << "L1/L2/L4 bit-identical: " << (exact ? "yes" : "no") << "; " << t << " s";
  o.require(exact, "exact norm preservation");
  o.require(t < 30.0, "runtime");
}

struct ChainCase {
  std::string name;
  ConformalFactor u;
  DomainSpec domain;
};

std::vector<ChainCase> chain_cases() {
  std::vector<ChainCase> cases;
  cases.push_back({"schwarzschild m=2 horizon", ConformalFactor::schwarzschild(3, 2.0), DomainSpec::ball(3, 1.0)});
  cases.push_back({"schwarzschild m=1 ball(1)", ConformalFactor::schwarzschild(3, 1.0), DomainSpec::ball(3, 1.0)});
  cases.push_back(
      {"schwarzschild m=2 ellipsoid", ConformalFactor::schwarzschild(3, 2.0), DomainSpec::ellipsoid({1.2, 1.0, 0.9})});
  cases.push_back({"multipole pair", ConformalFactor::multipole(3, {{{0.4, 0, 0}, 0.5}, {{-0.4, 0, 0}, 0.5}}),
                   DomainSpec::ball(3, 1.0)});
  cases.push_back({"multipole off-centre triple",
                   ConformalFactor::multipole(3, {{{0.3, 0.2, 0}, 0.3}, {{-0.2, 0.1, 0.2}, 0.6}, {{0, -0.3, 0}, 0.2}}),
                   DomainSpec::ellipsoid({1.1, 0.9, 0.8}, {0.05, 0, 0})});
  cases.push_back({"multipole union of balls", ConformalFactor::multipole(3, {{{0.8, 0, 0}, 0.4}, {{-0.8, 0, 0}, 0.4}}),
                   DomainSpec::union_of_balls({{{0.8, 0, 0}, 0.5}, {{-0.8, 0, 0}, 0.5}})});
  cases.push_back({"binary factor", binary_factor(1.0, 6.0), binary_domain(1.0, 6.0)});
  cases.push_back({"sampled shell K=0.25", shell_factor(1.0, 0.25, 2.0, {0, 0, 0}, 1.0 / 16.0, 4.0),
                   DomainSpec::ball(3, shell_horizon_radius(1.0, 0.25))});
  cases.push_back({"sampled shell off-centre", shell_factor(1.0, 0.5, 1.5, {0.2, 0, 0}, 1.0 / 16.0, 4.0),
                   DomainSpec::ball(3, 0.6)});
  cases.push_back({"sampled multipole", ConformalFactor::sampled(
                                            [](const Vec3& x) {
                                              const Vec3 d = x - Vec3{0.1, 0.1, 0};
                                              return 1.0 + 0.8 / std::max(norm(d), 0.05);
                                            },
                                            -4.0, 4.0, 1.0 / 16.0),
                   DomainSpec::ball(3, 0.9)});
  return cases;
}

// Energy chain on the solved flat potential.
void ac5(Outcome& o) {
  const auto t0 = Clock::now();
  int ok = 0;
  double worst_gap = INFINITY;
  std::string failures;
  for (const auto& c : chain_cases()) {
    const double l = [&] {
      const auto [lo, hi] = c.domain.bounding_box();
      return std::min({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]}) / 2.0;
    }();
    const double h = std::min(1.0 / 12.0, l / 8.0);
    const double tol = rearrangement_tol(h);
    const bool u_ge_one = check_u_ge_one(c.u, c.domain, h).ok;
    const auto cap = grid_capacity(c.domain, Weight::unit(), grid(h, 12.0 * c.domain.circumradius()));
    const auto& phi = std::get<GridField>(cap.potential);
    const double eg = capacity_energy(phi, Weight::conformal_squared(c.u));
    const double e1 = capacity_energy(phi, Weight::unit());
    const double slb = symmetrized_lower_bound(phi).value;
    const double V = euclidean_volume(c.domain, h).value;
    const double ball = flat_capacity_sphere(3, std::cbrt(V / ball_volume(3)));
    const bool chain = u_ge_one && eg >= e1 && e1 >= slb - tol && slb - tol >= ball - tol;
    worst_gap = std::min({worst_gap, eg - e1, e1 - (slb - tol), slb - ball});
    if (chain) {
      ++ok;
    } else {
      failures += " " + c.name + " (u>=1 " + std::to_string(u_ge_one) + ", E_g " + std::to_string(eg) + ", E_1 " +
                  std::to_string(e1) + ", sym " + std::to_string(slb) + ", ball " + std::to_string(ball) + ")";
    }
  }
  const double t = seconds_since(t0);
  o.detail << ok << "/10 scenarios hold the chain; smallest link margin " << worst_gap << "; " << t << " s";
  if (!failures.empty()) o.detail << ";" << failures;
  o.require(ok == 10, "chain on every scenario");
  o.require(t < 300.0, "runtime");
}

// ADM flux consistency on random multipoles.
void ac6(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-0.5, 0.5), q(0.1, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  double worst_flux = 0.0, worst_mass = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Pole> poles;
    std::vector<double> charges;
    for (int i = count(rng); i > 0; --i) {
      poles.push_back({{pos(rng), pos(rng), pos(rng)}, q(rng)});
      charges.push_back(poles.back().charge);
    }
    const auto u = ConformalFactor::multipole(3, poles);
    worst_flux = std::max(worst_flux, rel(adm_flux_general(conformal_metric(u), 100.0, 3, 1.0), adm_conformal(u, 100.0)));
    const auto est = adm_extrapolate(u, {16, 32, 64, 128, 256}, 1.0);
    worst_mass = std::max(worst_mass, rel(est.value, mass_of_multipole(charges)));
  }
  const double t = seconds_since(t0);
  o.detail << "10 configurations; max rel diff general vs conformal at r = 100: " << worst_flux
           << "; max rel err of extrapolated mass: " << worst_mass << "; " << t << " s";
  o.require(worst_flux <= 0.005, "fluxes agree within 0.5%");
  o.require(worst_mass <= 0.005, "extrapolation within 0.5%");
  o.require(t < 30.0, "runtime");
}

// Hypothesis validators.
void ac7(Outcome& o) {
  const auto t0 = Clock::now();
  int strict = 0, strict_ok = 0;
  for (const auto& entry : fs::directory_iterator(scenario_dir())) {
    if (entry.path().extension() != ".yaml") continue;
    const auto s = load_scenario(entry.path().string());
    if (s.mode != Mode::strict) continue;
    ++strict;
    if (check_u_ge_one(s.factor, s.domain, s.h()).ok) {
      ++strict_ok;
    } else {
      o.detail << "u < 1 in " << entry.path().filename().string() << "; ";
    }
  }
  const auto bad = ConformalFactor::sampled([](const Vec3& x) { return 1.0 - 0.1 / norm(x); }, -4.0, 4.0, 1.0 / 16.0);
  const auto caught = check_u_ge_one(bad, DomainSpec::ball(3, 1.0), 1.0 / 12.0);

  const auto u = ConformalFactor::schwarzschild(3, 2.0);
  const auto horizon = DomainSpec::ball(3, 1.0);
  bool within = true, shrinking = true;
  double previous = INFINITY;
  o.detail << "u >= 1 on " << strict_ok << "/" << strict << " strict scenarios; u = 1 - 0.1/r "
           << (caught.ok ? "missed" : "caught") << " (min u " << caught.worst << "); horizon residual";
  for (double h : {1.0 / 6.0, 1.0 / 12.0, 1.0 / 24.0, 1.0 / 48.0}) {
    const double sup = minimality_residual(u, horizon, h).sup_norm();
    within = within && sup <= 5.0 * h;
    shrinking = shrinking && sup < previous;
    previous = sup;
    o.detail << " " << sup;
  }
  const double t = seconds_since(t0);
  o.detail << " at h = 1/6..1/48; " << t << " s";
  o.require(strict > 0 && strict_ok == strict, "u >= 1 on strict scenarios");
  o.require(!caught.ok, "violation caught");
  o.require(within, "residual <= 5h");
  o.require(shrinking, "residual decreases");
  o.require(t < 30.0, "runtime");
}

// End-to-end runs of the example scenarios.
void ac8(Outcome& o) {
  const auto t0 = Clock::now();
  const auto r = run_scenario(load_scenario((scenario_dir() / "schwarzschild_strict.yaml").string()));
  const auto& m = r.margins;
  const auto& e = r.errors.margins;
  const bool margins = m.m_minus_C_g >= -e.m_minus_C_g && m.C_g_minus_C_flat >= -e.C_g_minus_C_flat &&
                       m.C_flat_minus_rhs_vol >= -e.C_flat_minus_rhs_vol;
  const auto f = run_scenario(load_scenario((scenario_dir() / "flat_ball_exploratory.yaml").string()));
  bool noted = false;
  for (const auto& note : f.notes) noted = noted || note.find("minimal_boundary: FAILED") != std::string::npos;
  const double t = seconds_since(t0);
  o.detail << "strict Schwarzschild " << verdict_name(r.verdict) << " (margins " << m.m_minus_C_g << ", "
           << m.C_g_minus_C_flat << ", " << m.C_flat_minus_rhs_vol << "); flat exploratory " << verdict_name(f.verdict)
           << " exit " << exit_code(f.verdict) << "; " << t << " s";
  o.require(r.verdict == Verdict::pass, "strict Schwarzschild PASS");
  o.require(margins, "margins nonnegative within errors");
  o.require(!f.hypotheses.minimal_boundary && noted, "minimality failure reported");
  o.require(exit_code(f.verdict) == 2, "exit code 2");
  o.require(t < 120.0, "runtime");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  std::vector<std::string> selected(argv + 1, argv + argc);
  bool all_pass = true;
  int run = 0;
  for (const auto& [id, fn] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
    ++run;
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("%s %s %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (run == 0) {
    std::fprintf(stderr, "no criterion matches; expected AC1..AC8\n");
    return 2;
  }
  return all_pass ? 0 : 1;
}
