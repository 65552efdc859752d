#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vpi/capacity.hpp"
#include "vpi/dimension.hpp"
#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/harness/report.hpp"
#include "vpi/harness/runner.hpp"
#include "vpi/harness/scenario.hpp"
#include "vpi/hypotheses.hpp"
#include "vpi/mass.hpp"
#include "vpi/measure.hpp"
#include "vpi/symmetrize.hpp"

namespace py = pybind11;
using namespace vpi;

namespace {

std::vector<Pole> to_poles(const std::vector<std::pair<std::vector<double>, double>>& poles) {
  std::vector<Pole> out;
  for (const auto& [center, charge] : poles) out.push_back({center, charge});
  return out;
}

py::dict capacity_dict(const CapacityResult& c) {
  py::dict d;
  d["value"] = c.value;
  d["error"] = c.error_estimate;
  d["iterations"] = c.stats.iterations;
  d["residual"] = c.stats.residual;
  d["converged"] = c.stats.converged;
  if (const auto* phi = std::get_if<GridField>(&c.potential)) {
    const auto dims = phi->mesh().dims();
    py::array_t<double> a({dims[0], dims[1], dims[2]});
    std::copy(phi->values().begin(), phi->values().end(), a.mutable_data());
    d["potential"] = a;
  }
  return d;
}

py::dict mass_dict(const MassEstimate& m) {
  py::dict d;
  d["value"] = m.value;
  d["residual"] = m.residual;
  d["fit_rejected"] = m.fit_rejected;
  d["samples"] = m.samples;
  d["exponent"] = m.fit.exponent;
  d["note"] = m.note;
  return d;
}

py::dict check_dict(const SampleCheck& c) {
  py::dict d;
  d["ok"] = c.ok;
  d["worst"] = c.worst;
  d["violations"] = c.violations;
  d["samples"] = c.samples;
  return d;
}

/// Cell values on the uniform mesh of spacing h over [lo, hi]^3; shape must match.
GridField field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values, double lo,
                           double hi, double h) {
  const auto mesh = Mesh::uniform({lo, lo, lo}, {hi, hi, hi}, h);
  const auto dims = mesh->dims();
  if (values.ndim() != 3 || static_cast<std::size_t>(values.shape(0)) != dims[0] ||
      static_cast<std::size_t>(values.shape(1)) != dims[1] || static_cast<std::size_t>(values.shape(2)) != dims[2]) {
    throw InputError("values must have shape (" + std::to_string(dims[0]) + ", " + std::to_string(dims[1]) + ", " +
                     std::to_string(dims[2]) + ")");
  }
  return GridField(mesh, std::vector<double>(values.data(), values.data() + values.size()));
}

std::string report_json(const Scenario& s, std::optional<std::string> mode, std::optional<double> resolution) {
  RunOptions o;
  if (mode) o.mode = parse_mode(*mode);
  o.resolution = resolution;
  return to_json(run_scenario(s, o)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Volumetric Penrose inequality toolkit";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_RuntimeError);

  m.def("ball_volume", &ball_volume, py::arg("n"));
  m.def("horizon_radius", &horizon_radius, py::arg("n"), py::arg("mass"));
  m.def("rhs_volumetric", [](int n, double v) { return rhs_volumetric(Dimension(n), v); }, py::arg("n"),
        py::arg("volume"));
  m.def("rhs_rpi", [](int n, double a) { return rhs_rpi(Dimension(n), a); }, py::arg("n"), py::arg("area"));
  m.def(
      "schwarzschild_data",
      [](int n, double mass) {
        const auto s = schwarzschild_data(n, mass);
        py::dict d;
        d["horizon_radius"] = s.horizon_radius;
        d["horizon_area"] = s.horizon_area;
        d["horizon_volume"] = s.horizon_volume;
        d["rhs_rpi"] = s.rhs_rpi;
        d["rhs_vol"] = s.rhs_vol;
        return d;
      },
      py::arg("n"), py::arg("mass"));

  py::class_<ConformalFactor>(m, "ConformalFactor")
      .def_static("schwarzschild", &ConformalFactor::schwarzschild, py::arg("n"), py::arg("mass"))
      .def_static(
          "multipole", [](int n, const std::vector<std::pair<std::vector<double>, double>>& poles) {
            return ConformalFactor::multipole(n, to_poles(poles));
          },
          py::arg("n"), py::arg("poles"), "poles: list of (center, charge)")
      .def_static("unit", &ConformalFactor::unit, py::arg("n"))
      .def_static("sampled", &ConformalFactor::sampled, py::arg("fn"), py::arg("lo"), py::arg("hi"),
                  py::arg("spacing"))
      .def_property_readonly("n", &ConformalFactor::n)
      .def_property_readonly("family", &ConformalFactor::family_name)
      .def("value", [](const ConformalFactor& u, const std::vector<double>& x) { return u.value(std::span(x)); })
      .def("laplacian",
           [](const ConformalFactor& u, const std::vector<double>& x) { return u.laplacian(std::span(x)); })
      .def("is_radial", &ConformalFactor::is_radial);
  m.def("shell_factor", &shell_factor, py::arg("mass"), py::arg("level"), py::arg("radius"),
        py::arg("center") = Vec3{}, py::arg("spacing") = 1.0 / 16.0, py::arg("half_width") = 4.0);
  m.def("binary_factor", &binary_factor, py::arg("charge"), py::arg("separation"));

  py::class_<DomainSpec>(m, "Domain")
      .def_static("ball", py::overload_cast<int, double>(&DomainSpec::ball), py::arg("n"), py::arg("radius"))
      .def_static("ball_at", py::overload_cast<std::vector<double>, double>(&DomainSpec::ball), py::arg("center"),
                  py::arg("radius"))
      .def_static("ellipsoid", &DomainSpec::ellipsoid, py::arg("semi_axes"), py::arg("center") = Vec3{})
      .def_static(
          "union_of_balls",
          [](const std::vector<std::pair<std::vector<double>, double>>& balls) {
            std::vector<DomainSpec::Ball> bs;
            for (const auto& [c, r] : balls) bs.push_back({c, r});
            return DomainSpec::union_of_balls(bs);
          },
          py::arg("balls"), "balls: list of (center, radius)")
      .def_property_readonly("n", &DomainSpec::n)
      .def_property_readonly("shape", &DomainSpec::shape_name)
      .def("circumradius", &DomainSpec::circumradius);
  m.def("binary_domain", &binary_domain, py::arg("charge"), py::arg("separation"));

  m.def(
      "euclidean_volume",
      [](const DomainSpec& d, double h) {
        const auto v = euclidean_volume(d, h);
        return py::make_tuple(v.value, v.error);
      },
      py::arg("domain"), py::arg("h"), "(volume, error estimate)");

  m.def("flat_capacity_sphere", &flat_capacity_sphere, py::arg("n"), py::arg("radius"));
  m.def(
      "radial_capacity",
      [](const ConformalFactor& u, double r) { return capacity_dict(radial_weighted_capacity(u, r)); },
      py::arg("factor"), py::arg("radius"), "capacity of the centred sphere in u^{4/(n-2)} delta");
  m.def(
      "grid_capacity",
      [](const DomainSpec& d, std::optional<ConformalFactor> u, double h, double r_out, bool estimate_error) {
        GridCapacityParams p;
        p.h = h;
        p.r_out = r_out;
        p.estimate_error = estimate_error;
        const Weight w = u ? Weight::conformal_squared(*u) : Weight::unit();
        std::optional<CapacityResult> res;
        {
          py::gil_scoped_release release;
          res = grid_capacity(d, w, p);
        }
        return capacity_dict(*res);
      },
      py::arg("domain"), py::arg("factor") = std::nullopt, py::arg("h") = 1.0 / 24.0, py::arg("r_out") = 16.0,
      py::arg("estimate_error") = false,
      "weight u^2 when a factor is given, otherwise flat; the potential is over the solved (possibly mirrored) mesh");

  m.def("adm_conformal", &adm_conformal, py::arg("factor"), py::arg("r"));
  m.def(
      "adm_flux_general",
      [](const ConformalFactor& u, double r, double min_radius) {
        return adm_flux_general(conformal_metric(u), r, u.n(), min_radius);
      },
      py::arg("factor"), py::arg("r"), py::arg("min_radius") = 0.0, "flux of the metric u^{4/(n-2)} delta");
  m.def(
      "adm_extrapolate",
      [](const ConformalFactor& u, const std::vector<double>& radii, double min_radius) {
        return mass_dict(adm_extrapolate(u, radii, min_radius));
      },
      py::arg("factor"), py::arg("radii"), py::arg("min_radius") = 0.0);
  m.def("mass_of_multipole", &mass_of_multipole, py::arg("charges"));

  m.def(
      "polya_szego",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> values, double lo, double hi, double h) {
        const auto rep = polya_szego_check(field_from_array(values, lo, hi, h));
        py::dict d;
        d["energy"] = rep.energy;
        d["energy_rearranged"] = rep.energy_rearranged;
        d["lp_errors"] = rep.lp_errors;
        return d;
      },
      py::arg("values"), py::arg("lo"), py::arg("hi"), py::arg("h"),
      "rearrange cell values on the uniform mesh of spacing h over [lo, hi]^3");
  m.def(
      "cell_centers",
      [](double lo, double hi, double h) {
        const auto mesh = Mesh::uniform({lo, lo, lo}, {hi, hi, hi}, h);
        const auto dims = mesh->dims();
        py::array_t<double> a({dims[0], dims[1], dims[2], std::size_t{3}});
        double* out = a.mutable_data();
        for (std::size_t i = 0; i < mesh->size(); ++i) {
          const Vec3 c = mesh->center(i);
          std::copy(c.begin(), c.end(), out + 3 * i);
        }
        return a;
      },
      py::arg("lo"), py::arg("hi"), py::arg("h"), "cell centres of the uniform mesh used by polya_szego");
  m.def("canonical_sum", &canonical_sum, py::arg("terms"));

  m.def(
      "minimality_residual",
      [](const ConformalFactor& u, const DomainSpec& d, double h) { return minimality_residual(u, d, h).sup_norm(); },
      py::arg("factor"), py::arg("domain"), py::arg("h"), "sup norm of the boundary mean curvature in g");
  m.def(
      "check_u_ge_one",
      [](const ConformalFactor& u, const DomainSpec& d, double h) { return check_dict(check_u_ge_one(u, d, h)); },
      py::arg("factor"), py::arg("domain"), py::arg("h"));
  m.def(
      "check_superharmonic",
      [](const ConformalFactor& u, const DomainSpec& d, double h) { return check_dict(check_superharmonic(u, d, h)); },
      py::arg("factor"), py::arg("domain"), py::arg("h"));

  m.def(
      "run_scenario_text",
      [](const std::string& text, std::optional<std::string> mode, std::optional<double> resolution) {
        const auto s = parse_scenario(text);
        py::gil_scoped_release release;
        return report_json(s, mode, resolution);
      },
      py::arg("text"), py::arg("mode") = std::nullopt, py::arg("resolution") = std::nullopt, "report as JSON text");
  m.def(
      "run_scenario_file",
      [](const std::string& path, std::optional<std::string> mode, std::optional<double> resolution) {
        const auto s = load_scenario(path);
        py::gil_scoped_release release;
        return report_json(s, mode, resolution);
      },
      py::arg("path"), py::arg("mode") = std::nullopt, py::arg("resolution") = std::nullopt, "report as JSON text");
  m.def(
      "sweep_csv",
      [](const std::string& text, const std::string& param, const std::vector<std::string>& values, unsigned workers) {
        py::gil_scoped_release release;
        return sweep_csv(param, run_sweep(text, param, values, workers));
      },
      py::arg("text"), py::arg("param"), py::arg("values"), py::arg("workers") = 1);
}
