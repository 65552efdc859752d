#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vpi/capacity.hpp"
#include "vpi/mass.hpp"

namespace vpi {

enum class Verdict { pass, chain_violation, hypothesis_failed, numerical_failure, input_error };

std::string verdict_name(Verdict v);
int exit_code(Verdict v);

struct HypothesisFlags {
  bool superharmonic = true;
  bool mean_convex = true;
  bool minimal_boundary = true;
  bool u_ge_one = true;
  double superharmonic_worst = 0.0;  // min of -Laplacian u over samples
  double min_h0 = 0.0;
  double minimality_sup = 0.0;
  double minimality_tolerance = 0.0;
  double min_u = 0.0;
  bool all() const { return superharmonic && mean_convex && minimal_boundary && u_ge_one; }
};

struct Quantities {
  double m = 0.0;
  double V = 0.0;
  double R = 0.0;
  double C_g = 0.0;
  double C_flat = 0.0;
  std::optional<double> C_flat_symmetrized;
  double rhs_vol = 0.0;
  std::optional<double> rhs_rpi;
};

struct Margins {
  double m_minus_C_g = 0.0;
  double C_g_minus_C_flat = 0.0;
  double C_flat_minus_rhs_vol = 0.0;
};

struct ErrorEstimates {
  double m = 0.0;
  double V = 0.0;
  double C_g = 0.0;
  double C_flat = 0.0;
  double rhs_vol = 0.0;
  Margins margins;  // error bar of each margin
};

struct Timings {
  double hypotheses = 0.0;
  double volume = 0.0;
  double mass = 0.0;
  double capacity_g = 0.0;
  double capacity_flat = 0.0;
  double total = 0.0;
};

struct Report {
  std::string scenario;
  std::string mode;
  int dim = 3;
  std::string path;  // "radial" or "grid"
  HypothesisFlags hypotheses;
  Quantities quantities;
  Margins margins;
  ErrorEstimates errors;
  std::optional<MassEstimate> mass;
  std::optional<SolverStats> solver_g;
  std::optional<SolverStats> solver_flat;
  Verdict verdict = Verdict::pass;
  std::string failed_stage;
  std::vector<std::string> notes;
  std::optional<Timings> timings;
};

nlohmann::ordered_json to_json(const Report& r);
nlohmann::ordered_json to_json(const MassEstimate& m);
nlohmann::ordered_json to_json(const SolverStats& s);

/// Fixed CSV column order for sweep tables.
std::vector<std::string> report_columns();
std::vector<std::string> report_row(const Report& r);

}  // namespace vpi
