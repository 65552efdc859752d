#include "vpi/harness/report.hpp"

#include "vpi/io.hpp"

namespace vpi {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::chain_violation: return "CHAIN_VIOLATION";
    case Verdict::hypothesis_failed: return "HYPOTHESIS_FAILED";
    case Verdict::numerical_failure: return "NUMERICAL_FAILURE";
    case Verdict::input_error: return "INPUT_ERROR";
  }
  return "INPUT_ERROR";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::chain_violation: return 1;
    case Verdict::hypothesis_failed: return 2;
    case Verdict::numerical_failure: return 3;
    case Verdict::input_error: return 4;
  }
  return 4;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json margins_json(const Margins& m) {
  return {{"m_minus_C_g", m.m_minus_C_g},
          {"C_g_minus_C_flat", m.C_g_minus_C_flat},
          {"C_flat_minus_rhs_vol", m.C_flat_minus_rhs_vol}};
}

}  // namespace

nlohmann::ordered_json to_json(const SolverStats& s) {
  return {{"iterations", s.iterations}, {"residual", s.residual}, {"unknowns", s.unknowns}, {"converged", s.converged}};
}

nlohmann::ordered_json to_json(const MassEstimate& m) {
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const auto& [r, v] : m.samples) samples.push_back({{"r", r}, {"m", v}});
  return {{"value", m.value},
          {"samples", samples},
          {"fit", {{"m_inf", m.fit.m_inf}, {"amplitude", m.fit.amplitude}, {"exponent", m.fit.exponent}}},
          {"residual", m.residual},
          {"fit_rejected", m.fit_rejected},
          {"note", m.note}};
}

nlohmann::ordered_json to_json(const Report& r) {
  const auto& h = r.hypotheses;
  const auto& q = r.quantities;
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["mode"] = r.mode;
  j["dim"] = r.dim;
  j["path"] = r.path;
  j["hypotheses"] = {{"superharmonic", h.superharmonic},
                     {"mean_convex", h.mean_convex},
                     {"minimal_boundary", h.minimal_boundary},
                     {"u_ge_one", h.u_ge_one},
                     {"superharmonic_worst", h.superharmonic_worst},
                     {"min_h0", h.min_h0},
                     {"minimality_sup", h.minimality_sup},
                     {"minimality_tolerance", h.minimality_tolerance},
                     {"min_u", h.min_u}};
  j["quantities"] = {{"m", q.m},
                     {"V", q.V},
                     {"R", q.R},
                     {"C_g", q.C_g},
                     {"C_flat", q.C_flat},
                     {"C_flat_symmetrized", optional_number(q.C_flat_symmetrized)},
                     {"rhs_vol", q.rhs_vol},
                     {"rhs_rpi", optional_number(q.rhs_rpi)}};
  j["margins"] = margins_json(r.margins);
  j["errors"] = {{"m", r.errors.m},
                 {"V", r.errors.V},
                 {"C_g", r.errors.C_g},
                 {"C_flat", r.errors.C_flat},
                 {"rhs_vol", r.errors.rhs_vol},
                 {"margins", margins_json(r.errors.margins)}};
  j["mass"] = r.mass ? to_json(*r.mass) : nlohmann::ordered_json(nullptr);
  j["solver"] = {{"C_g", r.solver_g ? to_json(*r.solver_g) : nlohmann::ordered_json(nullptr)},
                 {"C_flat", r.solver_flat ? to_json(*r.solver_flat) : nlohmann::ordered_json(nullptr)}};
  j["verdict"] = verdict_name(r.verdict);
  j["exit_code"] = exit_code(r.verdict);
  j["failed_stage"] = r.failed_stage;
  j["notes"] = r.notes;
  if (r.timings) {
    const auto& t = *r.timings;
    j["timings"] = {{"hypotheses", t.hypotheses}, {"volume", t.volume},     {"mass", t.mass},
                    {"capacity_g", t.capacity_g}, {"capacity_flat", t.capacity_flat}, {"total", t.total}};
  }
  return j;
}

std::vector<std::string> report_columns() {
  return {"scenario", "mode", "dim", "path", "superharmonic", "mean_convex", "minimal_boundary", "u_ge_one",
          "m", "V", "R", "C_g", "C_flat", "C_flat_symmetrized", "rhs_vol", "rhs_rpi",
          "m_minus_C_g", "C_g_minus_C_flat", "C_flat_minus_rhs_vol",
          "err_m", "err_C_g", "err_C_flat", "err_rhs_vol", "verdict", "failed_stage"};
}

std::vector<std::string> report_row(const Report& r) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  auto d = [](double v) { return format_double(v); };
  auto od = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  const auto& q = r.quantities;
  const auto& h = r.hypotheses;
  return {r.scenario, r.mode, std::to_string(r.dim), r.path, b(h.superharmonic), b(h.mean_convex),
          b(h.minimal_boundary), b(h.u_ge_one), d(q.m), d(q.V), d(q.R), d(q.C_g), d(q.C_flat),
          od(q.C_flat_symmetrized), d(q.rhs_vol), od(q.rhs_rpi), d(r.margins.m_minus_C_g),
          d(r.margins.C_g_minus_C_flat), d(r.margins.C_flat_minus_rhs_vol), d(r.errors.m),
          d(r.errors.C_g), d(r.errors.C_flat), d(r.errors.rhs_vol), verdict_name(r.verdict), r.failed_stage};
}

}  // namespace vpi
