#pragma once

#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "vpi/conformal_factor.hpp"
#include "vpi/domain.hpp"

namespace vpi {

enum class Mode { strict, exploratory };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& text);

struct Numerics {
  double h = 0.0;       // 0: feature_length / 24
  double r_out = 0.0;   // 0: 16 * circumradius
  std::vector<double> mass_radii;  // empty: chosen from the domain
  double tolerance = 1e-10;
  bool estimate_error = true;
};

/// Description of the conformal factor as written in the scenario file, kept
/// for reports (the ConformalFactor itself may be a sampled lattice).
struct FactorSpec {
  std::string family;  // schwarzschild | multipole | flat | shell | binary
  double mass = 0.0;   // schwarzschild, shell
  std::vector<Pole> poles;
  double shell_level = 0.0;   // shell: constant K inside the shell
  double shell_radius = 0.0;  // shell: radius a
  Vec3 shell_center{};
  double lattice_spacing = 1.0 / 16.0;
  double lattice_half_width = 4.0;
  double charge = 0.0;      // binary
  double separation = 0.0;  // binary
};

struct Scenario {
  std::string name;
  int n = 3;
  Mode mode = Mode::strict;
  DomainSpec domain;
  ConformalFactor factor;
  FactorSpec factor_spec;
  Numerics numerics;
  std::string source;  // original YAML text, for sweeps

  double h() const;
  /// Smallest length scale of Omega: the ball radius, the smallest semi-axis,
  /// or the smallest ball of a union.
  double feature_length() const;
  double r_out() const;
  std::vector<double> mass_radii() const;
};

/// Parse and validate a scenario. Diagnostics carry "line:col: field.path: message".
Scenario parse_scenario(const std::string& yaml_text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

/// Replace the scalar at a dotted path (e.g. "factor.mass", "numerics.h",
/// "factor.poles.0.charge") and re-serialize.
std::string override_parameter(const std::string& yaml_text, const std::string& path,
                               const std::string& value);

/// u = 1 + m/(2|x|) + psi(|x - p|) with psi = K inside radius a and K a / r
/// outside: the potential of a uniform shell, so u is superharmonic. While the
/// shell contains the sphere |x| = m / (2 (1 + K)), that sphere is exactly
/// minimal. Sampled on a lattice.
ConformalFactor shell_factor(double mass, double level, double radius, const Vec3& center,
                             double spacing, double half_width);
double shell_horizon_radius(double mass, double level);

/// Two poles of charge c at (+-s/2, 0, 0). Each ball of radius c / (1 + c/s)
/// about a pole is the minimal sphere of the pole plus the constant part of the
/// other pole's field; the neglected gradient makes it approximately minimal.
ConformalFactor binary_factor(double charge, double separation);
DomainSpec binary_domain(double charge, double separation);

}  // namespace vpi
