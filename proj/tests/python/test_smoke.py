import math
import os
from pathlib import Path

import numpy as np
import pytest

import vpi

SCENARIOS = Path(os.environ.get("VPI_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def test_schwarzschild_closed_forms():
    for n in (3, 4, 5):
        m = 2.0
        rh = vpi.horizon_radius(n, m)
        assert rh == pytest.approx((m / 2) ** (1 / (n - 2)), rel=1e-14)
        u = vpi.ConformalFactor.schwarzschild(n, m)
        assert vpi.radial_capacity(u, rh)["value"] == pytest.approx(m, rel=1e-9)
        assert vpi.flat_capacity_sphere(n, rh) == pytest.approx(rh ** (n - 2), rel=1e-14)
        assert vpi.schwarzschild_data(n, m)["rhs_vol"] == pytest.approx(m / 2, rel=1e-12)


def test_grid_capacity_returns_the_potential():
    res = vpi.grid_capacity(vpi.Domain.ball(3, 1.0), h=1 / 8, r_out=8.0)
    assert res["value"] == pytest.approx(1.0, rel=0.05)
    phi = res["potential"]
    assert phi.ndim == 3
    assert 0.0 <= phi.min() and phi.max() <= 1.0 + 1e-9


def test_mass_of_multipoles():
    u = vpi.ConformalFactor.multipole(3, [([0.2, 0.0, 0.0], 0.5), ([-0.3, 0.1, 0.0], 0.25)])
    est = vpi.adm_extrapolate(u, [16, 32, 64, 128, 256], 1.0)
    assert est["value"] == pytest.approx(vpi.mass_of_multipole([0.5, 0.25]), rel=5e-3)
    assert vpi.adm_flux_general(u, 100.0, 1.0) == pytest.approx(vpi.adm_conformal(u, 100.0), rel=1e-6)
    with pytest.raises(vpi.InputError):
        vpi.mass_of_multipole([1.0, -1.0])


def test_polya_szego_on_numpy_samples():
    lo, hi, h = -1.25, 1.25, 1 / 16
    x = vpi.cell_centers(lo, hi, h)
    values = np.exp(-((x - [0.3, 0, 0]) ** 2).sum(-1) / 0.05) + np.exp(-((x + [0.3, 0, 0]) ** 2).sum(-1) / 0.05)
    rep = vpi.polya_szego(values, lo, hi, h)
    assert rep["lp_errors"] == [0.0, 0.0, 0.0]
    assert rep["energy_rearranged"] < rep["energy"]
    with pytest.raises(ValueError):
        vpi.polya_szego(values[:-1], lo, hi, h)


def test_canonical_sum_is_order_independent():
    rng = np.random.default_rng(3)
    terms = list(rng.standard_normal(1000) * 10.0 ** rng.integers(-8, 8, 1000))
    assert vpi.canonical_sum(terms) == vpi.canonical_sum(terms[::-1]) == math.fsum(terms)


def test_hypotheses():
    u = vpi.ConformalFactor.schwarzschild(3, 2.0)
    horizon = vpi.Domain.ball(3, 1.0)
    assert vpi.minimality_residual(u, horizon, 1 / 24) <= 5 / 24
    assert vpi.check_u_ge_one(u, horizon, 1 / 12)["ok"]
    bad = vpi.ConformalFactor.sampled(lambda p: 1.0 - 0.1 / max(math.sqrt(sum(c * c for c in p)), 1e-3), -4.0, 4.0, 0.25)
    assert not vpi.check_u_ge_one(bad, horizon, 1 / 6)["ok"]


def test_scenarios_end_to_end():
    strict = vpi.verify(str(SCENARIOS / "schwarzschild_strict.yaml"))
    assert strict["verdict"] == "PASS"
    assert strict["quantities"]["C_g"] == pytest.approx(2.0, rel=1e-9)
    flat = vpi.verify(str(SCENARIOS / "flat_ball_exploratory.yaml"))
    assert flat["verdict"] == "HYPOTHESIS_FAILED"
    assert flat["exit_code"] == vpi.EXIT_CODES["HYPOTHESIS_FAILED"] == 2
    with pytest.raises(vpi.InputError):
        vpi.run_scenario("name: x\ndim: 2\n")


def test_sweep_csv():
    text = (SCENARIOS / "schwarzschild_strict.yaml").read_text()
    lines = vpi.sweep_csv(text, "factor.mass", ["1", "4"]).strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("parameter,value,")
