"""End-to-end checks that the python module exposes working core operations."""

import math

import numpy as np
import pytest

import gpelab as gp


def attractive_uniform(n=32):
    st = gp.StationaryState()
    st.grid = gp.Grid(n, 2.0 * math.sqrt(2.0) * math.pi)
    st.potential = gp.ZeroPotential()
    st.V = np.zeros(n)
    st.R = np.ones(n)
    st.mu = -1.0
    st.g1 = -1.0
    st.lap = gp.LaplacianKind.Spectral
    return st


def test_elliptic_kernel():
    assert gp.complete_K(0.2) == pytest.approx(1.586867847454166237308, rel=1e-14)
    sn, cn, dn = gp.jacobi_sn_cn_dn(0.7, 0.5)
    assert sn**2 + cn**2 == pytest.approx(1.0, abs=1e-14)
    assert dn**2 + 0.25 * sn**2 == pytest.approx(1.0, abs=1e-14)


def test_exact_state_and_verdict():
    grid = gp.grid_over_periods(gp.SnLattice(-1.0, 0.2), 64, 1)
    st = gp.exact_sn_state(-1.0, 0.2, 1.0, grid)
    assert st.mu == pytest.approx(24.02, abs=1e-12)
    assert gp.residual(st) < 1e-10
    v = gp.classify(st)
    assert v.classification == gp.Stability.Stable
    assert v.mu_s == pytest.approx(24.0, abs=1e-12)
    assert st.mu - v.mu_s == pytest.approx(0.02, abs=1e-10)
    lo, hi = v.instability_band
    assert lo == pytest.approx(24.0, abs=1e-12)


def test_attractive_uniform_unstable():
    st = attractive_uniform()
    v = gp.classify(st)
    assert v.classification == gp.Stability.Unstable
    assert v.lambda_growth == pytest.approx(1.0, abs=1e-9)
    spectrum = gp.product_spectrum(st)
    assert spectrum[0].real == pytest.approx(-1.0, abs=1e-9)


def test_linearized_growth_matches_rate():
    st = attractive_uniform()
    mode = gp.realize_mode(st, 0)
    init = gp.PerturbationField(mode.phi1, -mode.phi2)
    traj = gp.evolve_linearized(st, init, 1e-3, 5000)
    fit = gp.growth_rate(traj, 1.0, 4.0)
    assert fit.rate == pytest.approx(1.0, rel=1e-3)
    assert not fit.low_confidence


def test_suppression_experiment():
    st = attractive_uniform()
    opt = gp.ControlOptions()
    opt.t_end = 4.0
    rep = gp.control_experiment(st, 0, gp.ControlVariant.Suppressed, opt)
    assert rep.criterion == gp.CriterionVerdict.Unstable
    assert rep.bounded_controlled and not rep.bounded_baseline
    assert rep.suppression_ratio > math.exp(3.0)


def test_gpe_conserves_norm():
    grid = gp.grid_over_periods(gp.SnLattice(-1.0, 0.2), 64, 1)
    st = gp.exact_sn_state(-1.0, 0.2, 1.0, grid)
    traj = gp.evolve_gpe(st.R.astype(complex), st.potential, st.g1, grid, 1e-3, 1000,
                         record_every=50)
    assert traj.completed
    drift = max(abs(v - traj.norm[0]) for v in traj.norm)
    assert drift < 1e-10 * traj.norm[0]
    assert np.max(np.abs(np.abs(traj.final_psi) - st.R)) < 1e-6


def test_sweep_rows_follow_k_trend():
    plan = gp.SweepPlan()
    plan.axes = [gp.SweepAxis("k", [0.1, 0.2, 0.3])]
    plan.base.V0 = -1.0
    plan.base.g1 = 1.0
    plan.settings.grid_n = 48
    plan.settings.workers = 1
    records = gp.run_sweep(plan)
    assert [r.status for r in records] == ["ok"] * 3
    for r, k in zip(records, [0.1, 0.2, 0.3]):
        assert r.abs_mu_minus_mu_s == pytest.approx(0.5 * k * k, rel=1e-10)


def test_state_round_trip(tmp_path):
    grid = gp.grid_over_periods(gp.SnLattice(-0.5, 0.7), 32, 1)
    st = gp.exact_sn_state(-0.5, 0.7, 1.0, grid)
    path = str(tmp_path / "state.txt")
    gp.save_state(st, path)
    back = gp.load_state(path)
    assert back.mu == st.mu
    assert np.array_equal(back.R, st.R)
    assert back.lap == st.lap


def test_domain_errors_are_python_exceptions():
    grid = gp.Grid(32, 1.0)
    with pytest.raises(ValueError):
        gp.exact_sn_state(-1.0, 1.5, 1.0, grid)
