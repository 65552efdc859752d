#include "vpi/harness/scenario.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <limits>
#include <type_traits>
#include <set>
#include <sstream>

#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"

namespace vpi {

std::string mode_name(Mode m) { return m == Mode::strict ? "strict" : "exploratory"; }

Mode parse_mode(const std::string& text) {
  if (text == "strict") return Mode::strict;
  if (text == "exploratory") return Mode::exploratory;
  throw InputError("mode must be strict or exploratory, got '" + text + "'");
}

double Scenario::h() const { return numerics.h > 0.0 ? numerics.h : feature_length() / 24.0; }

double Scenario::feature_length() const {
  return std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, DomainSpec::Ball>) {
          return shape.radius;
        } else if constexpr (std::is_same_v<T, DomainSpec::Ellipsoid>) {
          return std::min({shape.semi_axes[0], shape.semi_axes[1], shape.semi_axes[2]});
        } else if constexpr (std::is_same_v<T, DomainSpec::UnionOfBalls>) {
          double r = std::numeric_limits<double>::infinity();
          for (const auto& b : shape.balls) r = std::min(r, b.radius);
          return r;
        } else {
          return domain.circumradius();
        }
      },
      domain.shape());
}

double Scenario::r_out() const {
  return numerics.r_out > 0.0 ? numerics.r_out : 16.0 * domain.circumradius();
}

std::vector<double> Scenario::mass_radii() const {
  if (!numerics.mass_radii.empty()) return numerics.mass_radii;
  const double rho = domain.circumradius();
  std::vector<double> radii;
  if (domain.is_centered_ball() && factor.is_radial()) {
    // Exact flux at every radius: go far enough that the fit error is negligible.
    for (int k = 10; k <= 14; ++k) radii.push_back(rho * std::pow(2.0, k));
  } else {
    for (int k = 4; k <= 9; ++k) radii.push_back(rho * std::pow(2.0, k));
  }
  return radii;
}

ConformalFactor shell_factor(double mass, double level, double radius, const Vec3& center,
                             double spacing, double half_width) {
  if (!(mass > 0.0)) throw InputError("factor.mass must be positive");
  if (!(level >= 0.0)) throw InputError("factor.level must be nonnegative");
  if (!(radius > 0.0)) throw InputError("factor.radius must be positive");
  auto fn = [=](const Vec3& x) {
    const double r = norm(x);
    const double q = norm(x - center);
    const double psi = q <= radius ? level : level * radius / q;
    return 1.0 + 0.5 * mass / std::max(r, 1e-300) + psi;
  };
  return ConformalFactor::sampled(fn, -half_width, half_width, spacing);
}

double shell_horizon_radius(double mass, double level) { return mass / (2.0 * (1.0 + level)); }

ConformalFactor binary_factor(double charge, double separation) {
  if (!(charge > 0.0)) throw InputError("factor.charge must be positive");
  if (!(separation > 0.0)) throw InputError("factor.separation must be positive");
  return ConformalFactor::multipole(3, {{{0.5 * separation, 0.0, 0.0}, charge},
                                        {{-0.5 * separation, 0.0, 0.0}, charge}});
}

DomainSpec binary_domain(double charge, double separation) {
  const double rho = charge / (1.0 + charge / separation);
  if (!(2.0 * rho < separation)) throw InputError("binary balls overlap: increase factor.separation");
  return DomainSpec::union_of_balls({{{0.5 * separation, 0.0, 0.0}, rho}, {{-0.5 * separation, 0.0, 0.0}, rho}});
}

namespace {

/// Field-path-aware accessors producing "origin:line:col: path: message" diagnostics.
class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& msg) const {
    std::ostringstream os;
    os << origin_;
    if (node.IsDefined() && node.Mark().line >= 0) {
      os << ':' << node.Mark().line + 1 << ':' << node.Mark().column + 1;
    }
    os << ": " << path << ": " << msg;
    throw InputError(os.str());
  }

  void known_keys(const YAML::Node& map, const std::string& path, std::set<std::string> keys) const {
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, join(path, key), "unknown field");
    }
  }

  double number(const YAML::Node& map, const std::string& path, const std::string& key,
                std::optional<double> fallback = std::nullopt) const {
    const YAML::Node v = map[key];
    if (!v) {
      if (fallback) return *fallback;
      fail(map, join(path, key), "required field is missing");
    }
    if (!v.IsScalar()) fail(v, join(path, key), "expected a number");
    try {
      const double d = v.as<double>();
      if (!std::isfinite(d)) fail(v, join(path, key), "must be finite");
      return d;
    } catch (const YAML::Exception&) {
      fail(v, join(path, key), "expected a number, got '" + v.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& map, const std::string& path, const std::string& key,
                  std::optional<double> fallback = std::nullopt) const {
    const double d = number(map, path, key, fallback);
    if (!(d > 0.0)) fail(map[key], join(path, key), "must be positive, got " + format(d));
    return d;
  }

  int integer(const YAML::Node& map, const std::string& path, const std::string& key, int fallback) const {
    const YAML::Node v = map[key];
    if (!v) return fallback;
    try {
      return v.as<int>();
    } catch (const YAML::Exception&) {
      fail(v, join(path, key), "expected an integer, got '" + v.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& map, const std::string& path, const std::string& key,
                   std::optional<std::string> fallback = std::nullopt) const {
    const YAML::Node v = map[key];
    if (!v) {
      if (fallback) return *fallback;
      fail(map, join(path, key), "required field is missing");
    }
    if (!v.IsScalar()) fail(v, join(path, key), "expected a string");
    return v.Scalar();
  }

  std::vector<double> vector(const YAML::Node& map, const std::string& path, const std::string& key,
                             std::size_t size, std::optional<std::vector<double>> fallback = std::nullopt) const {
    const YAML::Node v = map[key];
    if (!v) {
      if (fallback) return *fallback;
      fail(map, join(path, key), "required field is missing");
    }
    if (!v.IsSequence()) fail(v, join(path, key), "expected a list of numbers");
    if (size && v.size() != size) {
      fail(v, join(path, key), "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      try {
        out.push_back(v[i].as<double>());
      } catch (const YAML::Exception&) {
        fail(v[i], join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
      }
    }
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string format(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
  }

 private:
  std::string origin_;
};

Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

}  // namespace

Scenario parse_scenario(const std::string& yaml_text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw InputError(origin + ":" + std::to_string(e.mark.line + 1) + ":" +
                     std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  Reader rd(origin);
  if (!root.IsMap()) rd.fail(root, "(root)", "expected a mapping");
  rd.known_keys(root, "", {"name", "dim", "mode", "factor", "domain", "numerics"});

  Scenario s{.name = rd.text(root, "", "name"),
             .domain = DomainSpec::ball(3, 1.0),
             .factor = ConformalFactor::unit(3),
             .factor_spec = {},
             .numerics = {},
             .source = yaml_text};
  s.n = rd.integer(root, "", "dim", 3);
  if (s.n < 3) rd.fail(root["dim"], "dim", "dimension must be >= 3, got " + std::to_string(s.n));
  if (s.n > 12) rd.fail(root["dim"], "dim", "dimension above 12 is not supported");
  try {
    s.mode = parse_mode(rd.text(root, "", "mode", std::string("strict")));
  } catch (const InputError& e) {
    rd.fail(root["mode"], "mode", e.what());
  }

  // Factor.
  const YAML::Node fac = root["factor"];
  if (!fac) rd.fail(root, "factor", "required field is missing");
  FactorSpec& fs = s.factor_spec;
  fs.family = rd.text(fac, "factor", "family");
  const std::vector<double> origin_n(static_cast<std::size_t>(s.n), 0.0);
  auto need_3d = [&](const char* what) {
    if (s.n != 3) rd.fail(fac["family"], "factor.family", std::string(what) + " factors are three-dimensional");
  };
  if (fs.family == "schwarzschild") {
    rd.known_keys(fac, "factor", {"family", "mass"});
    fs.mass = rd.positive(fac, "factor", "mass");
    s.factor = ConformalFactor::schwarzschild(s.n, fs.mass);
  } else if (fs.family == "flat") {
    rd.known_keys(fac, "factor", {"family"});
    s.factor = ConformalFactor::unit(s.n);
  } else if (fs.family == "multipole") {
    rd.known_keys(fac, "factor", {"family", "poles"});
    const YAML::Node poles = fac["poles"];
    if (!poles || !poles.IsSequence()) rd.fail(fac, "factor.poles", "expected a list of poles");
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const std::string path = "factor.poles[" + std::to_string(i) + "]";
      rd.known_keys(poles[i], path, {"center", "charge"});
      Pole p;
      p.center = rd.vector(poles[i], path, "center", static_cast<std::size_t>(s.n), origin_n);
      p.charge = rd.positive(poles[i], path, "charge");
      fs.poles.push_back(std::move(p));
    }
    s.factor = ConformalFactor::multipole(s.n, fs.poles);
  } else if (fs.family == "shell") {
    need_3d("shell");
    rd.known_keys(fac, "factor", {"family", "mass", "level", "radius", "center", "lattice_spacing", "lattice_half_width"});
    fs.mass = rd.positive(fac, "factor", "mass");
    fs.shell_level = rd.number(fac, "factor", "level");
    if (fs.shell_level < 0.0) rd.fail(fac["level"], "factor.level", "must be nonnegative");
    fs.shell_radius = rd.positive(fac, "factor", "radius");
    fs.shell_center = to_vec3(rd.vector(fac, "factor", "center", 3, std::vector<double>{0, 0, 0}));
    fs.lattice_spacing = rd.positive(fac, "factor", "lattice_spacing", 1.0 / 16.0);
    fs.lattice_half_width = rd.positive(fac, "factor", "lattice_half_width", 4.0);
    if (norm(fs.shell_center) + fs.shell_radius >= fs.lattice_half_width) {
      rd.fail(fac, "factor.lattice_half_width", "the shell must lie inside the sampling lattice");
    }
    s.factor = shell_factor(fs.mass, fs.shell_level, fs.shell_radius, fs.shell_center,
                            fs.lattice_spacing, fs.lattice_half_width);
  } else if (fs.family == "binary") {
    need_3d("binary");
    rd.known_keys(fac, "factor", {"family", "charge", "separation"});
    fs.charge = rd.positive(fac, "factor", "charge");
    fs.separation = rd.positive(fac, "factor", "separation");
    s.factor = binary_factor(fs.charge, fs.separation);
  } else {
    rd.fail(fac["family"], "factor.family",
            "unknown family '" + fs.family + "' (schwarzschild, multipole, flat, shell, binary)");
  }

  // Domain.
  const YAML::Node dom = root["domain"];
  if (!dom) rd.fail(root, "domain", "required field is missing");
  const std::string shape = rd.text(dom, "domain", "shape");
  if (shape == "ball") {
    rd.known_keys(dom, "domain", {"shape", "radius", "center"});
    s.domain = DomainSpec::ball(rd.vector(dom, "domain", "center", static_cast<std::size_t>(s.n), origin_n),
                                rd.positive(dom, "domain", "radius"));
  } else if (shape == "horizon") {
    rd.known_keys(dom, "domain", {"shape", "scale"});
    const double scale = rd.positive(dom, "domain", "scale", 1.0);
    double r = 0.0;
    if (fs.family == "schwarzschild") {
      r = horizon_radius(s.n, fs.mass);
    } else if (fs.family == "shell") {
      r = shell_horizon_radius(fs.mass, fs.shell_level);
    } else if (fs.family == "multipole" && s.factor.is_radial() && !fs.poles.empty()) {
      r = std::pow(s.factor.far_field_charge(), 1.0 / (s.n - 2));
    } else {
      rd.fail(dom["shape"], "domain.shape", "a horizon needs a schwarzschild, shell or centred multipole factor");
    }
    s.domain = DomainSpec::ball(s.n, scale * r);
  } else if (shape == "ellipsoid" || shape == "union" || shape == "binary") {
    if (s.n != 3) rd.fail(dom["shape"], "domain.shape", shape + " domains are three-dimensional");
    if (shape == "ellipsoid") {
      rd.known_keys(dom, "domain", {"shape", "semi_axes", "center"});
      const auto ax = rd.vector(dom, "domain", "semi_axes", 3);
      for (int a = 0; a < 3; ++a) {
        if (!(ax[a] > 0.0)) rd.fail(dom["semi_axes"], "domain.semi_axes", "semi-axes must be positive");
      }
      s.domain = DomainSpec::ellipsoid(to_vec3(ax), to_vec3(rd.vector(dom, "domain", "center", 3, std::vector<double>{0, 0, 0})));
    } else if (shape == "union") {
      rd.known_keys(dom, "domain", {"shape", "balls"});
      const YAML::Node balls = dom["balls"];
      if (!balls || !balls.IsSequence() || balls.size() == 0) rd.fail(dom, "domain.balls", "expected a nonempty list");
      std::vector<DomainSpec::Ball> list;
      for (std::size_t i = 0; i < balls.size(); ++i) {
        const std::string path = "domain.balls[" + std::to_string(i) + "]";
        rd.known_keys(balls[i], path, {"center", "radius"});
        list.push_back({rd.vector(balls[i], path, "center", 3), rd.positive(balls[i], path, "radius")});
      }
      s.domain = DomainSpec::union_of_balls(std::move(list));
    } else {
      rd.known_keys(dom, "domain", {"shape"});
      if (fs.family != "binary") rd.fail(dom["shape"], "domain.shape", "a binary domain needs the binary factor");
      s.domain = binary_domain(fs.charge, fs.separation);
    }
  } else {
    rd.fail(dom["shape"], "domain.shape", "unknown shape '" + shape + "' (ball, horizon, ellipsoid, union, binary)");
  }
  if (s.n != 3 && !(s.domain.is_centered_ball() && s.factor.is_radial())) {
    rd.fail(root["dim"], "dim", "dimensions other than 3 need a centred ball and a radial factor");
  }

  // Numerics.
  if (const YAML::Node num = root["numerics"]) {
    rd.known_keys(num, "numerics", {"h", "r_out", "mass_radii", "tolerance", "estimate_error"});
    if (num["h"]) s.numerics.h = rd.positive(num, "numerics", "h");
    if (num["r_out"]) s.numerics.r_out = rd.positive(num, "numerics", "r_out");
    if (num["mass_radii"]) s.numerics.mass_radii = rd.vector(num, "numerics", "mass_radii", 0);
    s.numerics.tolerance = rd.positive(num, "numerics", "tolerance", 1e-10);
    if (const YAML::Node ee = num["estimate_error"]) {
      try {
        s.numerics.estimate_error = ee.as<bool>();
      } catch (const YAML::Exception&) {
        rd.fail(ee, "numerics.estimate_error", "expected true or false");
      }
    }
  }
  if (s.r_out() <= 2.0 * s.domain.circumradius()) {
    rd.fail(root["numerics"], "numerics.r_out", "the outer box must extend beyond twice the circumradius of the domain");
  }
  if (s.h() > 0.5 * s.feature_length()) {
    rd.fail(root["numerics"], "numerics.h", "resolution is coarser than half the smallest feature of the domain");
  }
  const auto radii = s.mass_radii();
  if (radii.size() < 3) rd.fail(root["numerics"], "numerics.mass_radii", "at least 3 radii are required");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string override_parameter(const std::string& yaml_text, const std::string& path, const std::string& value) {
  YAML::Node root = YAML::Load(yaml_text);
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.empty()) throw InputError("empty sweep parameter");
  YAML::Node node = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& p = parts[i];
    YAML::Node next;
    if (node.IsSequence()) {
      std::size_t k = 0;
      try {
        k = std::stoul(p);
      } catch (const std::exception&) {
        throw InputError("sweep parameter '" + path + "': '" + p + "' is not a list index");
      }
      if (k >= node.size()) throw InputError("sweep parameter '" + path + "': index " + p + " out of range");
      next = node[k];
    } else if (node.IsMap() && node[p]) {
      next = node[p];
    } else {
      throw InputError("sweep parameter '" + path + "' is not addressable in the scenario");
    }
    node.reset(next);
  }
  const auto& last = parts.back();
  const YAML::Node parsed = YAML::Load(value);
  if (node.IsSequence()) {
    std::size_t k = 0;
    try {
      k = std::stoul(last);
    } catch (const std::exception&) {
      throw InputError("sweep parameter '" + path + "': '" + last + "' is not a list index");
    }
    if (k >= node.size()) throw InputError("sweep parameter '" + path + "': index out of range");
    node[k] = parsed;
  } else if (node.IsMap()) {
    node[last] = parsed;
  } else {
    throw InputError("sweep parameter '" + path + "' is not addressable in the scenario");
  }
  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace vpi
