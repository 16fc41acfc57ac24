import math

import numpy as np
import pytest

import clms


@pytest.fixture(scope="module")
def default_model():
    spec = clms.random_scenario(42, 7, 3)
    return spec, clms.derive_model(spec)


def test_default_scenario_shapes(default_model):
    spec, model = default_model
    assert spec.L == 7 and spec.K == 3
    assert np.isclose(np.trace(spec.R), 7.0)
    assert np.isclose(np.linalg.norm(spec.h), 1.0)
    assert model.P.shape == (7, 7)
    assert np.allclose(model.P @ model.P, model.P, atol=1e-10)
    assert np.allclose(spec.C.T @ model.g, spec.f, atol=1e-10)
    assert len(model.lambdas) == 4
    assert clms.validate_spec(spec) == []


def test_misadjustment_forms_agree(default_model):
    _, model = default_model
    mu = 0.1 * clms.stability_max_step(model)
    direct = clms.misadjustment_direct(model, mu)
    eigen = clms.misadjustment_eigen(model, mu)
    lo, hi = clms.misadjustment_bounds(model, mu)
    assert abs(direct - eigen) / eigen < 1e-8
    assert lo <= direct <= hi


def test_transient_curve_starts_at_initial_deviation(default_model):
    _, model = default_model
    d0 = np.asarray(model.q) - np.asarray(model.g)
    curve = clms.transient_msd_curve(model, d0, 0.01, 5)
    assert len(curve) == 6
    assert curve[0] == pytest.approx(float(d0 @ d0), rel=1e-15)


def test_filter_step_keeps_constraints(default_model):
    spec, model = default_model
    state = clms.init_state(model)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.standard_normal(7)
        state = clms.clms_step(state, clms.Sample(x, float(x @ spec.h)), 0.02, model)
    assert state.n == 20
    assert np.allclose(spec.C.T @ state.w, spec.f, atol=1e-9)


def test_small_ensemble(default_model):
    spec, model = default_model
    cfg = clms.RunConfig()
    cfg.runs = 50
    cfg.iters = 200
    cfg.ss_window = 50
    stats = clms.ensemble_msd_curve(spec, model, 0.02, cfg)
    assert len(stats.msd) == 201
    assert stats.completed == 50 and stats.diverged == 0
    assert all(math.isfinite(v) for v in stats.msd)


def test_errors_are_typed(default_model):
    _, model = default_model
    with pytest.raises(clms.InstabilityError):
        clms.steady_state_msd(model, 10.0)
    with pytest.raises(clms.ConfigError):
        clms.parse_config("L = 7\nK = 7\n")
    with pytest.raises(clms.Error):
        clms.spd_sqrt(-np.eye(3))


def test_fig3_from_config():
    cfg = clms.parse_config("runs = 10\niters = 300\nss_window = 100\nmu = 0.1*mu_max, 0.2*mu_max\n")
    table = clms.run_fig3(cfg)
    assert list(table) == ["mu", "zeta_direct", "zeta_eigen", "zeta_min", "zeta_max", "zeta_empirical"]
    for d, e in zip(table["zeta_direct"], table["zeta_eigen"]):
        assert abs(d - e) / e < 1e-8
