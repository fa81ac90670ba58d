import math

import numpy as np
import pytest
from hypothesis import given, settings

from exclusion_lab import analysis
from exclusion_lab.analysis import (
    EquilibriumKind,
    Regime,
    Stability,
    ThresholdStatus,
    boundary_equilibria_two,
    classify_regime,
    coexistence_equilibria,
    coexistence_equilibrium,
    delta_thresholds,
    equilibria_bare,
    invasion_numbers_delta,
    invasion_numbers_ngm,
    local_stability,
    ngm_build,
    r0_bare,
    reproduction_numbers_two,
)
from exclusion_lab.model import IdeologyParams, ModelParams, derived_quantities, rhs
from fixtures import BARE_P1, P1, bare_params, random_supercritical_pair, scenario_params, two_params
from oracles import coexistence_scan

X_STAR_P1 = (3.9772727, 0.9980519, 0.7571429)


def test_r0_p1():
    assert r0_bare(BARE_P1) == pytest.approx(2.5142857, abs=1e-7)
    assert r0_bare(BARE_P1) == pytest.approx(1.0 * 0.2 * 0.22 / (0.1 * 0.175), rel=1e-14)


def test_r0_limits():
    no_route = ModelParams(1.0, 0.1, IdeologyParams(0.2, 0.2, 0.3, 1e-12, 0.05, 1.0))
    assert r0_bare(no_route) < 1e-9
    recruiter_only = ModelParams(1.0, 0.1, IdeologyParams(0.2, 0.2, 0.3, 1e-12, 1e-12, 0.0))
    assert r0_bare(recruiter_only) == pytest.approx(1.0 * 0.2 / (0.1 * 0.4), rel=1e-9)


def test_ngm_bare_matrices():
    f, v = ngm_build(P1, 0.1, 10.0)
    assert np.allclose(f, 0.2 * 10.0 * np.array([[0.0, 0.6], [0.0, 0.4]]), rtol=1e-15)
    assert np.allclose(v, [[0.4, -0.05], [-0.1, 0.45]], rtol=1e-15)
    # V is a nonsingular M-matrix
    assert v[0, 0] > 0 and v[1, 1] > 0 and v[0, 1] <= 0 and v[1, 0] <= 0
    assert np.linalg.det(v) == pytest.approx(0.175, rel=1e-12)


@given(bare_params)
def test_r0_matches_ngm(p):
    rho = analysis.ngm_spectral_radius(p.ideology1, p.mu, p.s0)
    assert rho == pytest.approx(r0_bare(p), rel=1e-10)


def test_equilibria_bare_p1():
    eqs = equilibria_bare(BARE_P1)
    assert [e.kind for e in eqs] == [EquilibriumKind.IDEOLOGY_FREE, EquilibriumKind.BARE_ENDEMIC]
    assert np.array_equal(eqs[0].state, [10.0, 0.0, 0.0])
    assert np.allclose(eqs[1].state, X_STAR_P1, atol=1e-7)
    for e in eqs:
        assert e.residual <= 1e-10
    assert eqs[0].stability is Stability.UNSTABLE
    assert eqs[1].stability is Stability.STABLE


def test_equilibria_bare_subcritical():
    p = BARE_P1.with_changes(ideology1=IdeologyParams(0.05, 0.2, 0.3, 0.1, 0.05, 0.6))
    assert r0_bare(p) == pytest.approx(0.6285714, abs=1e-7)
    eqs = equilibria_bare(p)
    assert [e.kind for e in eqs] == [EquilibriumKind.IDEOLOGY_FREE]
    assert eqs[0].stability is Stability.STABLE


def test_endemic_merges_with_ideology_free_at_threshold():
    dq = derived_quantities(P1, 0.1)
    beta_c = 0.1 / (1.0 * dq.c_tilde / dq.big_d)
    ip = IdeologyParams(beta_c * (1 + 1e-9), 0.2, 0.3, 0.1, 0.05, 0.6)
    s, e, r = analysis._endemic_point(ip, 1.0, 0.1)
    assert s == pytest.approx(10.0, rel=1e-8)
    assert abs(e) < 1e-8 and abs(r) < 1e-8


@given(bare_params)
def test_bare_equilibria_residual_and_positivity(p):
    eqs = equilibria_bare(p)
    for e in eqs:
        assert e.residual <= 1e-9 * max(1.0, p.lam)
    star = [e for e in eqs if e.kind is EquilibriumKind.BARE_ENDEMIC]
    assert bool(star) == (r0_bare(p) > 1)
    if star:
        assert np.all(star[0].state > 0)


def test_reproduction_numbers_two():
    p = ModelParams(1.0, 0.1, P1, P1)
    r1, r2 = reproduction_numbers_two(p)
    assert r1 == r2 == pytest.approx(2.5142857, abs=1e-7)
    half = ModelParams(1.0, 0.1, P1, IdeologyParams(0.1, 0.2, 0.3, 0.1, 0.05, 0.6))
    r1, r2 = reproduction_numbers_two(half)
    assert r2 == pytest.approx(r1 / 2, rel=1e-14)
    tiny = ModelParams(1.0, 0.1, P1, IdeologyParams(1e-12, 0.2, 0.3, 0.1, 0.05, 0.6))
    assert reproduction_numbers_two(tiny)[1] < 1e-10


@given(two_params)
def test_reproduction_numbers_match_bare_reductions(p):
    r1, r2 = reproduction_numbers_two(p)
    assert r1 == r0_bare(ModelParams(p.lam, p.mu, p.ideology1))
    assert r2 == r0_bare(ModelParams(p.lam, p.mu, p.ideology2))


def test_boundary_equilibria_existence():
    kinds = lambda p: [e.kind for e in boundary_equilibria_two(p)]
    assert kinds(scenario_params("situation3")) == [EquilibriumKind.IDEOLOGY_FREE, EquilibriumKind.DOMINANCE1]
    assert kinds(scenario_params("all_subcritical")) == [EquilibriumKind.IDEOLOGY_FREE]


def test_boundary_equilibria_symmetric_mirror():
    eqs = boundary_equilibria_two(ModelParams(1.0, 0.1, P1, P1, 0.7))
    xs, xss = eqs[1].state, eqs[2].state
    assert np.allclose(xs[[0, 3, 4, 1, 2]], xss, rtol=1e-15)
    assert np.allclose(xs[:3], X_STAR_P1, atol=1e-7)


@given(two_params)
def test_boundary_equilibria_residual_any_delta(p):
    for e in boundary_equilibria_two(p):
        assert e.residual <= 1e-9 * max(1.0, p.lam)
        assert np.all(e.state >= 0)


def test_invasion_numbers_at_zero_delta():
    p = ModelParams(1.0, 0.1, P1, IdeologyParams(0.1, 0.2, 0.3, 0.1, 0.05, 0.6))
    i1, i2 = invasion_numbers_delta(p)
    assert i2 == pytest.approx(0.5, rel=1e-12)
    assert i1 == pytest.approx(2.0, rel=1e-12)
    sym = ModelParams(1.0, 0.1, P1, P1)
    assert invasion_numbers_delta(sym) == pytest.approx((1.0, 1.0), rel=1e-12)


def test_invasion_numbers_undefined_without_dominance():
    i1, i2 = invasion_numbers_delta(scenario_params("situation3"))
    assert i1 is None and i2 is not None
    i1, i2 = invasion_numbers_delta(scenario_params("situation4"))
    assert i1 is not None and i2 is None


@settings(max_examples=300)
@given(two_params)
def test_invasion_numbers_closed_form_vs_ngm(p):
    closed = invasion_numbers_delta(p)
    ngm = invasion_numbers_ngm(p)
    for a, b in zip(closed, ngm):
        assert (a is None) == (b is None)
        if a is not None:
            assert a == pytest.approx(b, rel=1e-10)


@settings(max_examples=300)
@given(two_params)
def test_invasion_product_is_one_at_zero_delta(p):
    i1, i2 = invasion_numbers_delta(p, 0.0)
    if i1 is not None and i2 is not None:
        assert i1 * i2 == pytest.approx(1.0, rel=1e-12)


def test_invasion_monotone_in_delta():
    p = scenario_params("situation2c")
    grid = np.linspace(0.0, 5.0, 101)
    vals = np.array([invasion_numbers_delta(p, d) for d in grid], dtype=float)
    assert np.all(np.diff(vals[:, 1]) > 0)
    assert np.all(np.diff(vals[:, 0]) < 0)


def test_thresholds_symmetric_are_zero():
    th = delta_thresholds(ModelParams(1.0, 0.1, P1, P1))
    assert th.delta_star.value == 0.0 and th.delta_star_star.value == 0.0
    assert th.delta_star.status is ThresholdStatus.NON_POSITIVE
    assert th.sigma is None


def test_threshold_signs():
    th = delta_thresholds(scenario_params("situation2a"))
    assert th.delta_star.positive and th.delta_star.value > 0
    th = delta_thresholds(scenario_params("situation1"))
    assert th.delta_star_star.status is ThresholdStatus.NON_POSITIVE
    assert th.delta_star_star.value < 0


def test_threshold_values_fixtures():
    th = delta_thresholds(scenario_params("situation2c"))
    assert th.delta_star.value == pytest.approx(0.110027, abs=1e-6)
    assert th.delta_star_star.value == pytest.approx(0.460843, abs=1e-6)
    assert th.sigma == pytest.approx(th.delta_star_star.value - th.delta_star.value, rel=1e-15)


def test_thresholds_hit_one():
    rng = np.random.default_rng(11)
    for _ in range(300):
        p = random_supercritical_pair(rng)
        th = delta_thresholds(p)
        if th.delta_star.positive:
            assert invasion_numbers_delta(p, th.delta_star.value)[1] == pytest.approx(1.0, abs=1e-9)
        if th.delta_star_star.positive:
            assert invasion_numbers_delta(p, th.delta_star_star.value)[0] == pytest.approx(1.0, abs=1e-9)


def test_spurious_delta_star_never_crosses():
    rng = np.random.default_rng(12)
    seen = 0
    for _ in range(400):
        p = random_supercritical_pair(rng)
        th = delta_thresholds(p)
        if th.delta_star.status is ThresholdStatus.NO_CROSSING:
            seen += 1
            r1, r2 = reproduction_numbers_two(p)
            assert r1 < r2
            i2 = invasion_numbers_delta(p, th.delta_star.value)[1]
            assert i2 > 1.0
    assert seen > 0


def test_classify_regime_labels():
    expected = {
        "situation1": Regime.SITUATION1,
        "situation2a": Regime.SITUATION2A,
        "situation2b": Regime.SITUATION2B,
        "situation2c": Regime.SITUATION2C,
        "situation3": Regime.SITUATION3,
        "situation4": Regime.SITUATION4,
        "all_subcritical": Regime.ALL_SUBCRITICAL,
    }
    for name, label in expected.items():
        rep = classify_regime(scenario_params(name))
        assert rep.regime_label is label, name
        assert not rep.degenerate


def test_situation1_invasion_order():
    p = scenario_params("situation1")
    for d in (0.01, 0.3, 1.0, 10.0):
        i1, i2 = invasion_numbers_delta(p, d)
        assert i1 < 1 < i2


def test_degenerate_flags():
    assert classify_regime(ModelParams(1.0, 0.1, P1, P1, 0.2)).degenerate
    p = scenario_params("situation2c")
    ds = delta_thresholds(p).delta_star.value
    rep = classify_regime(p.with_changes(delta=ds))
    assert rep.degenerate and "delta = delta*" in rep.notes


def test_local_stability_bare():
    sub = ModelParams(1.0, 0.1, IdeologyParams(0.05, 0.2, 0.3, 0.1, 0.05, 0.6))
    assert local_stability(sub, [10.0, 0, 0])[1] is Stability.STABLE
    assert local_stability(BARE_P1, [10.0, 0, 0])[1] is Stability.UNSTABLE


def test_case_2b_bistability():
    p = scenario_params("situation2b")
    th = delta_thresholds(p)
    d = 0.5 * (th.delta_star.value + th.delta_star_star.value)
    eqs = {e.kind: e.stability for e in boundary_equilibria_two(p.with_changes(delta=d))}
    assert eqs[EquilibriumKind.DOMINANCE1] is Stability.STABLE
    assert eqs[EquilibriumKind.DOMINANCE2] is Stability.STABLE


def test_marginal_at_threshold():
    p = scenario_params("situation3")
    ds = delta_thresholds(p).delta_star.value
    x = analysis.dominance_state(p, 1)
    assert local_stability(p.with_changes(delta=ds), x)[1] is Stability.MARGINAL


def test_no_coexistence_without_cross_interaction():
    for name in ("situation1", "situation2b", "situation3", "competition_delta0"):
        p = scenario_params(name, delta=0.0)
        assert coexistence_equilibrium(p) is None


def test_coexistence_situation3_above_threshold():
    p = scenario_params("situation3")
    assert p.delta > delta_thresholds(p).delta_star.value
    eq = coexistence_equilibrium(p)
    assert eq is not None and eq.stability is Stability.STABLE
    assert eq.residual <= 1e-10
    assert np.all(eq.state > 1e-10) and eq.state.sum() < p.s0


def test_coexistence_case_2b_interior_unstable():
    eq = coexistence_equilibrium(scenario_params("situation2b"))
    assert eq is not None and eq.stability is Stability.UNSTABLE


def _delta_samples(p):
    th = delta_thresholds(p)
    pos = sorted(t.value for t in (th.delta_star, th.delta_star_star) if t.positive)
    edges = [0.0] + pos + [2 * (pos[-1] if pos else 1.0) + 0.5]
    return [0.5 * (a + b) for a, b in zip(edges, edges[1:])]


def test_coexistence_newton_matches_reduction_oracle():
    rng = np.random.default_rng(21)
    checked = 0
    for _ in range(60):
        p = random_supercritical_pair(rng)
        for d in _delta_samples(p):
            q = p.with_changes(delta=d)
            roots = coexistence_equilibria(q)
            scan = coexistence_scan(q)
            assert len(roots) == len(scan)
            for r, s in zip(sorted(roots, key=lambda e: e.state[0]), sorted(scan, key=lambda x: x[0])):
                assert np.allclose(r.state, s, rtol=1e-7, atol=1e-9)
            checked += 1
    assert checked > 60


@pytest.mark.parametrize("name", ["situation2a", "situation2b", "situation2c", "situation3", "situation1", "situation4"])
def test_predicted_picture_matches_jacobian(name):
    p = scenario_params(name)
    for d in _delta_samples(p):
        q = p.with_changes(delta=d)
        pred = analysis.predicted_picture(classify_regime(q))
        bnd = {e.kind: e.stability for e in boundary_equilibria_two(q)}
        assert pred.x_star == bnd.get(EquilibriumKind.DOMINANCE1)
        assert pred.x_star_star == bnd.get(EquilibriumKind.DOMINANCE2)
        co = coexistence_equilibrium(q)
        assert pred.coexistence == (co.stability if co else None)


def test_equilibrium_report_to_dict():
    d = equilibria_bare(BARE_P1)[1].to_dict(("S", "E", "R"))
    assert d["kind"] == "BareEndemic" and d["stability"] == "Stable"
    assert math.isclose(d["state"]["S"], X_STAR_P1[0], abs_tol=1e-7)
    assert len(d["eigenvalues"]) == 3


def test_nearest_equilibrium():
    eq, dist = analysis.nearest_equilibrium(BARE_P1, [4.0, 1.0, 0.75])
    assert eq.kind is EquilibriumKind.BARE_ENDEMIC and dist < 0.03


def test_all_equilibria_residual_bound():
    for name in ("situation2b", "situation2c", "situation3", "cross_gas"):
        p = scenario_params(name)
        for e in analysis.all_equilibria(p):
            assert e.residual <= 1e-9 * max(1.0, p.lam)
            assert np.max(np.abs(rhs(p, e.state))) == e.residual
