#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "vpi/errors.hpp"
#include "vpi/geom_core.hpp"
#include "vpi/harness/report.hpp"
#include "vpi/harness/runner.hpp"
#include "vpi/harness/scenario.hpp"

using namespace vpi;

namespace {

std::string schwarzschild_yaml(int n, double m, const std::string& mode = "strict") {
  std::ostringstream os;
  os << "name: s\ndim: " << n << "\nmode: " << mode << "\nfactor:\n  family: schwarzschild\n  mass: " << m
     << "\ndomain:\n  shape: horizon\n";
  return os.str();
}

std::string error_of(const std::string& yaml) {
  try {
    parse_scenario(yaml, "t.yaml");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("scenario diagnostics name the field and the line") {
    const auto dim = error_of("name: a\ndim: 2\nfactor:\n  family: flat\ndomain:\n  shape: ball\n  radius: 1\n");
    CHECK(dim.find("t.yaml:2:") != std::string::npos);
    CHECK(dim.find("dim") != std::string::npos);

    const auto charge = error_of(
        "name: a\ndim: 3\nfactor:\n  family: multipole\n  poles:\n    - center: [0, 0, 0]\n      charge: -1\n"
        "domain:\n  shape: ball\n  radius: 1\n");
    CHECK(charge.find("t.yaml:7:") != std::string::npos);
    CHECK(charge.find("factor.poles[0].charge") != std::string::npos);

    const auto family = error_of("name: a\ndim: 3\nfactor:\n  family: kerr\ndomain:\n  shape: ball\n  radius: 1\n");
    CHECK(family.find("factor.family") != std::string::npos);

    const auto field = error_of(schwarzschild_yaml(3, 1.0) + "colour: red\n");
    CHECK(field.find("colour") != std::string::npos);
    CHECK(field.find("unknown field") != std::string::npos);

    CHECK_FALSE(error_of("name: [unclosed\n").empty());
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.yaml"), InputError);
  }

  TEST_CASE("parameter overrides") {
    const auto text = override_parameter(schwarzschild_yaml(3, 1.0), "factor.mass", "4");
    CHECK(parse_scenario(text).factor.schwarzschild_mass() == 4.0);
    CHECK_THROWS_AS(override_parameter(schwarzschild_yaml(3, 1.0), "factor.poles.0.charge", "1"), InputError);
    CHECK_THROWS_AS(override_parameter(schwarzschild_yaml(3, 1.0), "", "1"), InputError);
  }

  TEST_CASE("Schwarzschild horizon passes with exact values") {
    const auto r = run_scenario(parse_scenario(schwarzschild_yaml(3, 2.0)));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.path == "radial");
    CHECK(r.quantities.m == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.quantities.C_g == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.quantities.C_flat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.quantities.rhs_vol == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.failed_stage.empty());
    CHECK_FALSE(r.timings.has_value());
  }

  TEST_CASE("reports are deterministic") {
    const auto s = parse_scenario(schwarzschild_yaml(3, 1.5));
    CHECK(to_json(run_scenario(s)).dump() == to_json(run_scenario(s)).dump());
  }

  TEST_CASE("strict mode stops at a failed hypothesis, exploratory mode computes") {
    const std::string flat = "name: f\ndim: 3\nmode: strict\nfactor:\n  family: flat\ndomain:\n  shape: ball\n  radius: 1\n";
    const auto strict = run_scenario(parse_scenario(flat));
    CHECK(strict.verdict == Verdict::hypothesis_failed);
    CHECK_FALSE(strict.hypotheses.minimal_boundary);
    CHECK(strict.quantities.C_g == 0.0);

    RunOptions o;
    o.mode = Mode::exploratory;
    const auto expl = run_scenario(parse_scenario(flat), o);
    CHECK(expl.verdict == Verdict::hypothesis_failed);
    CHECK(exit_code(expl.verdict) == 2);
    CHECK(expl.quantities.C_g == doctest::Approx(1.0));
    CHECK(expl.quantities.m == doctest::Approx(0.0).epsilon(1e-12));
    bool noted = false;
    for (const auto& note : expl.notes) noted = noted || note.find("minimal_boundary: FAILED") != std::string::npos;
    CHECK(noted);
  }

  TEST_CASE("sweep over the mass reproduces rhs_vol = m / 2") {
    const std::vector<std::string> masses{"0.5", "1", "2", "4"};
    const auto rows = run_sweep(schwarzschild_yaml(3, 1.0), "factor.mass", masses, 2);
    REQUIRE(rows.size() == masses.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].value == masses[i]);
      REQUIRE(rows[i].report);
      CHECK(rows[i].report->verdict == Verdict::pass);
      CHECK(rows[i].report->quantities.rhs_vol == doctest::Approx(std::stod(masses[i]) / 2.0).epsilon(1e-12));
    }
    const auto csv = sweep_csv("factor.mass", rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    const auto empty = sweep_csv("factor.mass", run_sweep(schwarzschild_yaml(3, 1.0), "factor.mass", {}, 2));
    CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);

    const auto bad = run_sweep(schwarzschild_yaml(3, 1.0), "factor.mass", {"abc", "-1"}, 1);
    for (const auto& row : bad) {
      CHECK_FALSE(row.report);
      CHECK_FALSE(row.error.empty());
    }
  }

  TEST_CASE("Schwarzschild family saturates the first link in every dimension") {
    for (int n : {3, 4, 5}) {
      for (double m : {0.5, 1.0, 2.0, 8.0}) {
        const auto r = run_scenario(parse_scenario(schwarzschild_yaml(n, m)));
        CAPTURE(n);
        CAPTURE(m);
        CHECK(r.verdict == Verdict::pass);
        CHECK(std::abs(r.quantities.m - r.quantities.C_g) <= 1e-6 * m);
        CHECK(r.margins.C_g_minus_C_flat >= -1e-6);
        CHECK(r.margins.C_flat_minus_rhs_vol >= -1e-6);
        CHECK(r.quantities.rhs_vol == doctest::Approx(schwarzschild_data(n, m).rhs_vol).epsilon(1e-12));
      }
    }
  }
}
