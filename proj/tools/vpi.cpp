#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vpi/capacity.hpp"
#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/harness/report.hpp"
#include "vpi/harness/runner.hpp"
#include "vpi/harness/scenario.hpp"
#include "vpi/io.hpp"
#include "vpi/mass.hpp"
#include "vpi/measure.hpp"
#include "vpi/symmetrize.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string mode;
  std::string out;
  double resolution = 0.0;
  bool timings = false;

  vpi::RunOptions run_options() const {
    vpi::RunOptions o;
    o.timings = timings;
    if (!mode.empty()) o.mode = vpi::parse_mode(mode);
    if (resolution > 0.0) o.resolution = resolution;
    return o;
  }
  fs::path out_dir() const {
    fs::path dir = out.empty() ? fs::path(vpi::default_out_dir()) : fs::path(out);
    fs::create_directories(dir);
    return dir;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vpi::InputError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vpi::InputError("cannot write " + path.string());
  out << text;
}

/// Scenario with the global overrides applied.
vpi::Scenario load(const std::string& path, const Globals& g) {
  auto s = vpi::load_scenario(path);
  const auto o = g.run_options();
  if (o.mode) s.mode = *o.mode;
  if (o.resolution) s.numerics.h = *o.resolution;
  return s;
}

vpi::GridCapacityParams grid_params(const vpi::Scenario& s) {
  vpi::GridCapacityParams p;
  p.h = s.h();
  p.r_out = s.r_out();
  p.tolerance = s.numerics.tolerance;
  p.estimate_error = s.numerics.estimate_error;
  return p;
}

bool radial_path(const vpi::Scenario& s) { return s.domain.is_centered_ball() && s.factor.is_radial(); }

int cmd_verify(const std::string& path, const Globals& g) {
  const auto s = vpi::load_scenario(path);
  const auto report = vpi::run_scenario(s, g.run_options());
  const std::string text = vpi::to_json(report).dump(2) + "\n";
  write_text(g.out_dir() / (s.name + ".json"), text);
  std::cout << text;
  return vpi::exit_code(report.verdict);
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string v; std::getline(ss, v, ',');) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(v.substr(b, e - b + 1));
  }
  return out;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& values, unsigned workers,
              const Globals& g) {
  const std::string text = read_file(path);
  const auto base = vpi::parse_scenario(text, path);
  const auto rows = vpi::run_sweep(text, param, split_values(values), workers, g.run_options(), path);
  const std::string csv = vpi::sweep_csv(param, rows);
  write_text(g.out_dir() / (base.name + "_sweep.csv"), csv);
  std::cout << csv;
  // Most severe outcome across rows; a row that could not run counts as an input error.
  int code = 0;
  for (const auto& row : rows) code = std::max(code, row.report ? vpi::exit_code(row.report->verdict) : 4);
  return code;
}

int cmd_capacity(const std::string& path, const Globals& g) {
  const auto s = load(path, g);
  const auto dir = g.out_dir();
  json j;
  j["scenario"] = s.name;
  if (radial_path(s)) {
    const double r = s.domain.ball_radius();
    const auto cg = vpi::radial_weighted_capacity(s.factor, r);
    j["path"] = "radial";
    j["C_g"] = cg.value;
    j["C_g_error"] = cg.error_estimate;
    j["C_flat"] = vpi::flat_capacity_sphere(s.n, r);
    vpi::write_profile_csv(std::get<vpi::RadialProfile>(cg.potential), dir / (s.name + "_potential_g.csv"));
  } else {
    const auto p = grid_params(s);
    const auto cg = vpi::grid_capacity(s.domain, vpi::Weight::conformal_squared(s.factor), p);
    const auto cf = vpi::grid_capacity(s.domain, vpi::Weight::unit(), p);
    j["path"] = "grid";
    j["C_g"] = cg.value;
    j["C_g_error"] = cg.error_estimate;
    j["C_flat"] = cf.value;
    j["C_flat_error"] = cf.error_estimate;
    j["solver"] = {{"C_g", vpi::to_json(cg.stats)}, {"C_flat", vpi::to_json(cf.stats)}};
    vpi::write_grid_binary(std::get<vpi::GridField>(cg.potential), dir / (s.name + "_potential_g.bin"));
    vpi::write_grid_binary(std::get<vpi::GridField>(cf.potential), dir / (s.name + "_potential_flat.bin"));
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_mass(const std::string& path, const Globals& g) {
  const auto s = load(path, g);
  const auto m = vpi::adm_extrapolate(s.factor, s.mass_radii(), s.domain.circumradius());
  json j = vpi::to_json(m);
  j = json{{"scenario", s.name}, {"mass", j}};
  std::cout << j.dump(2) << "\n";
  return m.fit_rejected ? 3 : 0;
}

int cmd_symmetrize(const std::string& input, const Globals& g) {
  vpi::GridField phi;
  std::string name;
  if (fs::path(input).extension() == ".bin") {
    phi = vpi::read_grid_binary(input);
    name = fs::path(input).stem().string();
  } else {
    const auto s = load(input, g);
    if (s.n != 3) throw vpi::InputError("symmetrize needs a three-dimensional scenario");
    auto p = grid_params(s);
    p.estimate_error = false;
    phi = std::get<vpi::GridField>(vpi::grid_capacity(s.domain, vpi::Weight::unit(), p).potential);
    name = s.name;
  }
  const auto dir = g.out_dir();
  const bool has_domain = phi.mesh().domain().has_value();
  json j;
  j["input"] = name;
  if (has_domain) {
    const auto b = vpi::symmetrized_lower_bound(phi);
    const auto r = vpi::rearrange(vpi::extend_into_omega(phi), std::pair{0.0, 1.0});
    vpi::write_profile_csv(b.profile, dir / (name + "_profile.csv"));
    vpi::write_level_map_csv(r, dir / (name + "_levels.csv"));
    j["radius"] = b.radius;
    j["lower_bound"] = b.value;
    j["tail"] = b.tail;
    j["decaying"] = b.decaying;
    j["norms"] = {{"original", r.norms.original}, {"rearranged", r.norms.rearranged}};
  } else {
    const auto r = vpi::rearrange(phi);
    vpi::write_profile_csv(r.profile, dir / (name + "_profile.csv"));
    vpi::write_level_map_csv(r, dir / (name + "_levels.csv"));
    j["norms"] = {{"original", r.norms.original}, {"rearranged", r.norms.rearranged}};
    j["boundary_warning"] = r.boundary_warning;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_schwarzschild(int n, const std::vector<double>& masses) {
  std::cout << vpi::csv_row({"n", "m", "r_h", "horizon_area", "horizon_volume", "rhs_rpi", "rhs_vol", "C_g",
                             "C_flat"});
  for (double m : masses) {
    const auto d = vpi::schwarzschild_data(n, m);
    std::cout << vpi::csv_row({std::to_string(n), vpi::format_double(m), vpi::format_double(d.horizon_radius),
                               vpi::format_double(d.horizon_area), vpi::format_double(d.horizon_volume),
                               vpi::format_double(d.rhs_rpi), vpi::format_double(d.rhs_vol),
                               vpi::format_double(m),
                               vpi::format_double(vpi::flat_capacity_sphere(n, d.horizon_radius))});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volumetric Penrose inequality toolkit: ADM mass, capacity and symmetrization"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--mode", g.mode, "strict or exploratory; overrides the scenario")
      ->check(CLI::IsMember({"strict", "exploratory"}));
  app.add_option("--out", g.out, "output directory (default $VPI_OUT_DIR or ./out)");
  app.add_option("--resolution", g.resolution, "grid spacing h; overrides the scenario")->check(CLI::PositiveNumber);
  app.add_flag("--timings", g.timings, "include wall-clock times in reports");

  std::string scenario;
  auto* verify = app.add_subcommand("verify", "run the full inequality chain on a scenario");
  verify->add_option("scenario", scenario)->required();

  std::string param, values;
  unsigned workers = vpi::default_workers();
  auto* sweep = app.add_subcommand("sweep", "run a scenario once per value of a parameter");
  sweep->add_option("scenario", scenario)->required();
  sweep->add_option("--param", param, "dotted path of the field, e.g. factor.mass")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--workers", workers, "concurrent scenarios (default $VPI_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* capacity = app.add_subcommand("capacity", "C_g and C_flat of a scenario, with the potentials");
  capacity->add_option("scenario", scenario)->required();
  auto* mass = app.add_subcommand("mass", "extrapolated ADM mass of a scenario");
  mass->add_option("scenario", scenario)->required();
  auto* symmetrize = app.add_subcommand("symmetrize", "rearrange a solved potential (.bin) or a scenario's flat potential");
  symmetrize->add_option("input", scenario)->required();

  int n = 3;
  std::vector<double> masses;
  auto* schw = app.add_subcommand("schwarzschild", "closed-form Schwarzschild table");
  schw->add_option("--n", n, "dimension")->check(CLI::Range(3, 64));
  schw->add_option("--m", masses, "masses")->required()->check(CLI::PositiveNumber);

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (*verify) return cmd_verify(scenario, g);
    if (*sweep) return cmd_sweep(scenario, param, values, workers, g);
    if (*capacity) return cmd_capacity(scenario, g);
    if (*mass) return cmd_mass(scenario, g);
    if (*symmetrize) return cmd_symmetrize(scenario, g);
    if (*schw) return cmd_schwarzschild(n, masses);
  } catch (const vpi::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const vpi::HypothesisError& e) {
    std::cerr << "hypothesis failed: " << e.what() << "\n";
    return 2;
  } catch (const vpi::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
