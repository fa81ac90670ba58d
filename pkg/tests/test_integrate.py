import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from exclusion_lab.analysis import bare_endemic_state, dominance_state
from exclusion_lab.integrate import (
    IntegratorConfig,
    NegativeUndershoot,
    StepLimitExceeded,
    StepUnderflow,
    Trajectory,
    convergence_check,
    integrate,
    integrate_ode,
    invariant_region_check,
)
from exclusion_lab.model import IdeologyParams, ModelParams, ValidationError, rhs
from exclusion_lab.verification import SplitMix64, sample_in_region
from fixtures import BARE_P1, scenario_params

BARE_SUB = ModelParams(1.0, 0.1, IdeologyParams(0.05, 0.2, 0.3, 0.1, 0.05, 0.6))


def test_exponential_decay():
    traj = integrate_ode(lambda t, y: -y, [1.0], (0.0, 1.0))
    assert traj.final[0] == pytest.approx(math.exp(-1), abs=1e-9)


def test_dense_samples_match_exact_solution():
    traj = integrate_ode(lambda t, y: np.array([y[1], -y[0]]), [0.0, 1.0], (0.0, 20.0),
                         IntegratorConfig(sample_interval=0.25))
    assert np.allclose(traj.states[:, 0], np.sin(traj.times), atol=1e-7)
    assert np.allclose(np.diff(traj.times), 0.25)


def test_time_grid_includes_end_point():
    traj = integrate(BARE_P1, [10.0, 0.01, 0.01], (0.0, 2.5))
    assert list(traj.times) == [0.0, 1.0, 2.0, 2.5]


def test_zero_span_returns_initial_state():
    traj = integrate(BARE_P1, [10.0, 0.01, 0.01], (0.0, 0.0))
    assert len(traj) == 1 and np.array_equal(traj.final, [10.0, 0.01, 0.01])


def test_ideology_free_point_is_fixed():
    traj = integrate(BARE_P1, [10.0, 0.0, 0.0], (0.0, 500.0))
    assert np.max(np.abs(traj.states - [10.0, 0.0, 0.0])) <= 1e-12


def test_endemic_point_stays_within_tolerance():
    # the closed form carries ~1e-16 residual; large steps amplify it up to the
    # error-control scale, not beyond
    x = bare_endemic_state(BARE_P1)
    traj = integrate(BARE_P1, x, (0.0, 500.0))
    assert np.max(np.abs(traj.states - x)) <= 1e-7


def test_supercritical_run_reaches_endemic_point():
    traj = integrate(BARE_P1, [10.0, 0.01, 0.01], (0.0, 5000.0))
    assert np.max(np.abs(traj.final - bare_endemic_state(BARE_P1))) <= 1e-6


def test_matches_scipy_reference():
    p = scenario_params("situation2b")
    x0 = [5.0, 0.5, 0.5, 0.3, 0.3]
    ours = integrate(p, x0, (0.0, 100.0), IntegratorConfig(rtol=1e-10, atol=1e-12))
    ref = solve_ivp(lambda t, y: rhs(p, y), (0.0, 100.0), x0, method="DOP853",
                    rtol=1e-12, atol=1e-14, t_eval=ours.times)
    assert np.allclose(ours.states, ref.y.T, atol=1e-8)


def test_deterministic():
    p = scenario_params("cross_gas")
    a = integrate(p, [1.0, 2.0, 0.5, 0.5, 0.1], (0.0, 300.0))
    b = integrate(p, [1.0, 2.0, 0.5, 0.5, 0.1], (0.0, 300.0))
    assert np.array_equal(a.states, b.states) and a.stats == b.stats


def test_fixed_step_order():
    t_end = 50.0
    x0 = [10.0, 0.01, 0.01]
    ref = integrate(BARE_P1, x0, (0, t_end), IntegratorConfig(rtol=1e-12, atol=1e-14, sample_interval=t_end)).final
    hs = [2.0, 1.0, 0.5, 0.25]
    errs = []
    for h in hs:
        cfg = IntegratorConfig(rtol=1e6, atol=1e6, first_step=h, max_step=h, sample_interval=t_end)
        errs.append(np.max(np.abs(integrate(BARE_P1, x0, (0, t_end), cfg).final - ref)))
    orders = np.diff(np.log(errs)) / np.diff(np.log(hs))
    assert np.all(orders >= 4.5)


def test_step_limit():
    with pytest.raises(StepLimitExceeded):
        integrate(BARE_P1, [10.0, 0.01, 0.01], (0.0, 100.0), IntegratorConfig(max_steps=3))


def test_step_underflow_on_blowup():
    with pytest.raises(StepUnderflow):
        integrate_ode(lambda t, y: y ** 2, [1.0], (0.0, 2.0))


def test_negative_undershoot_is_not_clamped():
    with pytest.raises(NegativeUndershoot):
        integrate_ode(lambda t, y: -np.ones_like(y), [1.0], (0.0, 2.0), nonnegative=True)
    # without the flag a plain ODE may go negative
    assert integrate_ode(lambda t, y: -np.ones_like(y), [1.0], (0.0, 2.0)).final[0] == pytest.approx(-1.0)


def test_config_validation():
    for bad in (dict(rtol=0.0), dict(atol=-1.0), dict(max_steps=0), dict(sample_interval=0.0),
                dict(first_step=-1.0), dict(max_step=0.0)):
        with pytest.raises(ValueError):
            IntegratorConfig(**bad)


def test_inadmissible_start_rejected():
    with pytest.raises(ValidationError):
        integrate(BARE_P1, [1.0, -0.1, 0.0], (0.0, 1.0))
    with pytest.raises(ValueError):
        integrate(BARE_P1, [1.0, 0.0, 0.0], (1.0, 0.0))


def test_region_inside_start():
    rep = invariant_region_check(integrate(BARE_P1, [2.0, 3.0, 4.0], (0.0, 300.0)), BARE_P1)
    assert rep.passed and rep.started_inside and rep.max_total_excess <= 0


def test_region_outside_start_attracted():
    traj = integrate(BARE_P1, [10.0, 5.0, 5.0], (0.0, 300.0))
    rep = invariant_region_check(traj, BARE_P1)
    assert rep.passed and not rep.started_inside
    totals = traj.states.sum(axis=1)
    assert totals[0] == 20.0 and totals[-1] < 10.0


def test_region_from_origin():
    rep = invariant_region_check(integrate(BARE_P1, [0.0, 0.0, 0.0], (0.0, 100.0)), BARE_P1)
    assert rep.passed and rep.min_component >= -1e-8


def test_region_check_flags_violation():
    times = np.array([0.0, 1.0])
    bad = Trajectory(times, np.array([[5.0, 1.0, 1.0], [11.0, 0.0, 0.0]]), None)
    rep = invariant_region_check(bad, BARE_P1)
    assert not rep.passed and rep.failures


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_region_random_cross_starts(seed):
    p = scenario_params("situation2b")
    x0 = sample_in_region(SplitMix64(seed), p)
    assert invariant_region_check(integrate(p, x0, (0.0, 200.0)), p).passed


def test_convergence_check_semantics():
    target = np.array([1.0])
    traj = Trajectory(np.arange(5.0), np.array([[3.0], [1.0], [2.0], [1.0], [1.0]]), None)
    assert convergence_check(traj, target, 0.1) == (True, 3.0)
    traj = Trajectory(np.arange(3.0), np.array([[1.0], [1.0], [2.0]]), None)
    assert convergence_check(traj, target, 0.1) == (False, None)
    traj = Trajectory(np.arange(2.0), np.array([[1.0], [1.0]]), None)
    assert convergence_check(traj, target, 0.0) == (True, 0.0)


def test_subcritical_converges_to_ideology_free():
    traj = integrate(BARE_SUB, [3.0, 2.0, 4.0], (0.0, 5000.0))
    ok, entry = convergence_check(traj, [10.0, 0.0, 0.0], 1e-6)
    assert ok and entry < 5000.0


def test_competition_excludes_weaker_ideology():
    p = scenario_params("competition_delta0")
    traj = integrate(p, [2.0, 1.0, 1.0, 2.0, 2.0], (0.0, 5000.0))
    assert np.all(traj.final[3:] < 1e-6)
    assert convergence_check(traj, dominance_state(p, 1), 1e-6)[0]
