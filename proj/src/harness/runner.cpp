#include "vpi/harness/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/hypotheses.hpp"
#include "vpi/io.hpp"
#include "vpi/measure.hpp"

namespace vpi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Tiny floor so exact comparisons do not fail on the last bit.
double rounding_floor(double a, double b) { return 1e-12 * (std::abs(a) + std::abs(b)); }

void check_hypotheses(const Scenario& s, Report& r) {
  const double h = s.h();
  auto& f = r.hypotheses;
  const auto sh = check_superharmonic(s.factor, s.domain, h);
  f.superharmonic = sh.ok;
  f.superharmonic_worst = sh.worst;
  const auto mc = mean_convex(s.domain, h);
  f.mean_convex = mc.ok;
  f.min_h0 = mc.min_h0;
  const auto res = minimality_residual(s.factor, s.domain, h);
  f.minimality_sup = res.sup_norm();
  // First order in h, made scale-invariant: sup |H_g| l <= 5 h / l.
  const double l = s.feature_length();
  f.minimality_tolerance = 5.0 * h / (l * l);
  f.minimal_boundary = f.minimality_sup <= f.minimality_tolerance;
  const auto ge = check_u_ge_one(s.factor, s.domain, h);
  f.u_ge_one = ge.ok;
  f.min_u = ge.worst;
}

void compute(const Scenario& s, Report& r, Timings& t) {
  const int n = s.n;
  const double h = s.h();
  auto& q = r.quantities;
  auto& e = r.errors;
  const bool radial = s.domain.is_centered_ball() && s.factor.is_radial();
  r.path = radial ? "radial" : "grid";

  auto t0 = Clock::now();
  r.failed_stage = "volume";
  const auto vol = euclidean_volume(s.domain, h);
  q.V = vol.value;
  e.V = vol.error;
  q.R = std::pow(q.V / ball_volume(n), 1.0 / n);
  t.volume = seconds_since(t0);

  t0 = Clock::now();
  r.failed_stage = "mass";
  r.mass = adm_extrapolate(s.factor, s.mass_radii(), s.domain.circumradius());
  q.m = r.mass->value;
  e.m = r.mass->residual + 1e-12 * std::abs(q.m);
  if (r.mass->fit_rejected) r.notes.push_back("mass: " + r.mass->note);
  t.mass = seconds_since(t0);

  if (radial) {
    const double rb = s.domain.ball_radius();
    t0 = Clock::now();
    r.failed_stage = "capacity_g";
    const auto cg = radial_weighted_capacity(s.factor, rb);
    q.C_g = cg.value;
    e.C_g = cg.error_estimate;
    t.capacity_g = seconds_since(t0);
    r.failed_stage = "capacity_flat";
    q.C_flat = flat_capacity_sphere(n, rb);
    e.C_flat = 0.0;
  } else {
    GridCapacityParams p;
    p.h = h;
    p.r_out = s.r_out();
    p.tolerance = s.numerics.tolerance;
    p.estimate_error = s.numerics.estimate_error;
    t0 = Clock::now();
    r.failed_stage = "capacity_g";
    const auto cg = grid_capacity(s.domain, Weight::conformal_squared(s.factor), p);
    q.C_g = cg.value;
    e.C_g = cg.error_estimate;
    r.solver_g = cg.stats;
    t.capacity_g = seconds_since(t0);
    t0 = Clock::now();
    r.failed_stage = "capacity_flat";
    const auto cf = grid_capacity(s.domain, Weight::unit(), p);
    q.C_flat = cf.value;
    e.C_flat = cf.error_estimate;
    r.solver_flat = cf.stats;
    r.failed_stage = "symmetrization";
    const auto slb = symmetrized_lower_bound(std::get<GridField>(cf.potential));
    q.C_flat_symmetrized = slb.value;
    t.capacity_flat = seconds_since(t0);
  }

  r.failed_stage = "rhs";
  const Dimension dim(n);
  q.rhs_vol = rhs_volumetric(dim, q.V);
  e.rhs_vol = q.rhs_vol * (n - 2.0) / n * e.V / q.V;
  try {
    q.rhs_rpi = rhs_rpi(dim, boundary_area_in_g(s.domain, s.factor, h));
  } catch (const InputError&) {
    q.rhs_rpi.reset();
  }

  r.margins = {q.m - q.C_g, q.C_g - q.C_flat, q.C_flat - q.rhs_vol};
  e.margins = {e.m + e.C_g + rounding_floor(q.m, q.C_g), e.C_g + e.C_flat + rounding_floor(q.C_g, q.C_flat),
               e.C_flat + e.rhs_vol + rounding_floor(q.C_flat, q.rhs_vol)};
  r.failed_stage.clear();
}

}  // namespace

Report run_scenario(Scenario s, const RunOptions& options) {
  if (options.mode) s.mode = *options.mode;
  if (options.resolution) {
    if (!(*options.resolution > 0.0)) throw InputError("resolution must be positive");
    s.numerics.h = *options.resolution;
  }
  Report r;
  r.scenario = s.name;
  r.mode = mode_name(s.mode);
  r.dim = s.n;
  r.path = s.domain.is_centered_ball() && s.factor.is_radial() ? "radial" : "grid";
  Timings t;
  const auto start = Clock::now();
  try {
    auto t0 = Clock::now();
    r.failed_stage = "hypotheses";
    check_hypotheses(s, r);
    t.hypotheses = seconds_since(t0);
    const bool hyp_ok = r.hypotheses.all();
    if (!hyp_ok && s.mode == Mode::strict) {
      r.verdict = Verdict::hypothesis_failed;
    } else {
      compute(s, r, t);
      const auto& m = r.margins;
      const auto& em = r.errors.margins;
      const bool chain_ok = m.m_minus_C_g >= -em.m_minus_C_g && m.C_g_minus_C_flat >= -em.C_g_minus_C_flat &&
                            m.C_flat_minus_rhs_vol >= -em.C_flat_minus_rhs_vol;
      r.verdict = !hyp_ok ? Verdict::hypothesis_failed : (chain_ok ? Verdict::pass : Verdict::chain_violation);
    }
  } catch (const HypothesisError& e) {
    r.verdict = Verdict::hypothesis_failed;
    r.notes.push_back(e.what());
  } catch (const NumericalError& e) {
    r.verdict = Verdict::numerical_failure;
    r.notes.push_back(r.failed_stage + ": " + e.what());
  } catch (const InputError& e) {
    r.verdict = Verdict::input_error;
    r.notes.push_back(r.failed_stage + ": " + e.what());
  }
  if (!r.hypotheses.minimal_boundary) {
    r.notes.push_back(
        "minimal_boundary: FAILED; the boundary is not minimal in g, so the volumetric bound from this "
        "domain is a weaker statement and the chain m >= C_g need not hold");
  }
  if (s.mode == Mode::exploratory) {
    r.notes.push_back("exploratory mode: hypotheses are reported, not enforced; this is not a verification of the inequality");
  }
  if (options.timings) {
    t.total = seconds_since(start);
    r.timings = t;
  }
  return r;
}

std::vector<SweepRow> run_sweep(const std::string& template_yaml, const std::string& parameter,
                                const std::vector<std::string>& values, unsigned workers,
                                const RunOptions& options, const std::string& origin) {
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      rows[i].value = values[i];
      try {
        const auto text = override_parameter(template_yaml, parameter, values[i]);
        rows[i].report = run_scenario(parse_scenario(text, origin), options);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(values.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rows;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  std::vector<std::string> header{"parameter", "value"};
  for (const auto& c : report_columns()) header.push_back(c);
  header.push_back("error");
  std::string out = csv_row(header);
  for (const auto& row : rows) {
    std::vector<std::string> fields{parameter, row.value};
    if (row.report) {
      for (auto& f : report_row(*row.report)) fields.push_back(std::move(f));
    } else {
      fields.resize(header.size() - 1);
    }
    std::string err = row.error;
    if (err.empty() && row.report && !row.report->failed_stage.empty() && !row.report->notes.empty()) {
      err = row.report->notes.front();
    }
    fields.push_back(err);
    out += csv_row(fields);
  }
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("VPI_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string default_out_dir() {
  if (const char* env = std::getenv("VPI_OUT_DIR"); env && *env) return env;
  return "out";
}

}  // namespace vpi
