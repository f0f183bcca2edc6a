import numpy as np
import pytest

from lognls.functionals import mass
from lognls.grid import Field, make_grid, sample
from lognls.oracle import standing_gausson
from lognls.solver import (
    SplitConfig,
    final_state,
    nonlinear_flow,
    observed_order,
    phi_log,
    run,
    strang_step,
)

from conftest import random_field


def test_phi_log_guards_zero():
    assert phi_log(0.0) == 0.0
    assert phi_log(1e-200) == 0.0
    assert phi_log(np.e) == pytest.approx(2.0)


def test_nonlinear_flow_keeps_modulus(rng):
    u = random_field(make_grid(4, 6), rng)
    w = nonlinear_flow(u, 0.7, 1.0)
    np.testing.assert_allclose(np.abs(w.values), np.abs(u.values), rtol=1e-15)


def test_strang_step_conserves_mass(any_bc, rng):
    u = random_field(make_grid(4, 6, any_bc), rng)
    assert mass(strang_step(u, 0.01, 1.0)) == pytest.approx(mass(u), rel=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        SplitConfig(0.0, 1.0, 10)
    with pytest.raises(ValueError):
        SplitConfig(1.0, 1.0, 0)
    cfg = SplitConfig(1.0, 1.0, 1000)
    assert cfg.tau == 1e-3 and cfg.stride == 5


def test_run_matches_repeated_steps(rng):
    u = sample(np.tanh, make_grid(16, 6))
    v = u
    for _ in range(10):
        v = strang_step(v, 0.01, 1.0)
    np.testing.assert_allclose(final_state(u, SplitConfig(1.0, 0.1, 10)).values, v.values, atol=1e-13)


def test_recording_times_are_step_multiples():
    u = sample(np.tanh, make_grid(16, 6))
    tr = run(u, SplitConfig(1.0, 0.1, 30, record_every=7))
    assert tr.steps == [0, 7, 14, 21, 28, 30]
    assert tr.times[-1] == pytest.approx(0.1)


def test_oddness_preserved():
    tr = run(sample(np.tanh, make_grid(16, 8)), SplitConfig(1.0, 0.1, 100))
    assert max(r.odd_defect for r in tr.records) < 1e-12


def test_gausson_is_standing():
    g = make_grid(16, 10)
    u0 = standing_gausson(g, -1.0, -1.0, 0.0)
    uT = final_state(u0, SplitConfig(-1.0, 0.5, 500))
    exact = standing_gausson(g, -1.0, -1.0, 0.5)
    assert np.sqrt(mass(Field(g, uT.values - exact.values))) < 5e-4


def test_linear_self_test_is_degenerate():
    # lam = 0: the sub-flows commute, the splitting error is at rounding level
    g = make_grid(16, 6)
    u0 = sample(lambda x: np.exp(-(x**2)), g)
    from lognls.spectral import linear_propagator

    est = observed_order(u0, 0.0, 0.1, [0.02, 0.01], reference=lambda t: linear_propagator(u0, t))
    assert est.degenerate and np.isnan(est.order)


def test_observed_order_requires_divisible_steps():
    u0 = sample(np.tanh, make_grid(16, 5))
    with pytest.raises(ValueError):
        observed_order(u0, 1.0, 0.1, [0.03])


def test_nonfinite_abort_truncates(monkeypatch):
    import lognls.solver as solver

    calls = {"n": 0}
    real = solver._nonlinear

    def poisoned(values, t, lam):
        calls["n"] += 1
        out = real(values, t, lam)
        if calls["n"] == 3:
            out = out.copy()
            out[5] = np.nan
        return out

    monkeypatch.setattr(solver, "_nonlinear", poisoned)
    tr = run(sample(np.tanh, make_grid(16, 5)), SplitConfig(1.0, 0.1, 10, record_every=1))
    assert tr.aborted and "step 3" in tr.abort_reason
    assert tr.steps == [0, 1, 2]
