"""Equilibria, reproduction/invasion numbers, delta thresholds, regimes, stability."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .model import (
    IdeologyParams,
    ModelParams,
    derived_quantities,
    jacobian,
    jacobian_two,
    rhs,
    rhs_two,
)

STABILITY_MARGIN = 1e-9
DEGENERATE_RTOL = 1e-12


class Undefined(ValueError):
    """A quantity whose prerequisite (usually an equilibrium) does not exist."""


class NoConvergence(ArithmeticError):
    pass


class EquilibriumKind(str, enum.Enum):
    IDEOLOGY_FREE = "IdeologyFree"
    BARE_ENDEMIC = "BareEndemic"
    DOMINANCE1 = "Dominance1"
    DOMINANCE2 = "Dominance2"
    COEXISTENCE = "Coexistence"


class Stability(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


class Regime(str, enum.Enum):
    SITUATION1 = "Situation1"
    SITUATION2A = "Situation2A"
    SITUATION2B = "Situation2B"
    SITUATION2C = "Situation2C"
    SITUATION3 = "Situation3"
    SITUATION4 = "Situation4"
    ALL_SUBCRITICAL = "AllSubcritical"


class ThresholdStatus(str, enum.Enum):
    OK = "Ok"
    NON_POSITIVE = "NonPositive"
    # the algebraic root exists but the invasion number never reaches 1 there
    NO_CROSSING = "NoCrossing"
    UNDEFINED = "Undefined"


@dataclass(frozen=True)
class EquilibriumReport:
    kind: EquilibriumKind
    state: np.ndarray
    eigenvalues: np.ndarray
    stability: Stability
    residual: float

    def to_dict(self, labels) -> dict:
        return {
            "kind": self.kind.value,
            "state": dict(zip(labels, map(float, self.state))),
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "stability": self.stability.value,
            "residual": float(self.residual),
        }


@dataclass(frozen=True)
class Threshold:
    value: float | None
    status: ThresholdStatus

    @property
    def positive(self) -> bool:
        return self.status is ThresholdStatus.OK


@dataclass(frozen=True)
class Thresholds:
    delta_star: Threshold
    delta_star_star: Threshold
    sigma: float | None


@dataclass(frozen=True)
class RegimeReport:
    r0: float | None
    r1: float | None
    r2: float | None
    i1_delta: float | None
    i2_delta: float | None
    delta: float
    delta_star: Threshold | None
    delta_star_star: Threshold | None
    sigma: float | None
    regime_label: Regime | None
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def thr(t):
            if t is None:
                return None
            return {"value": t.value, "status": t.status.value}
        return {
            "r0": self.r0,
            "r1": self.r1,
            "r2": self.r2,
            "i1_delta": self.i1_delta,
            "i2_delta": self.i2_delta,
            "delta": self.delta,
            "delta_star": thr(self.delta_star),
            "delta_star_star": thr(self.delta_star_star),
            "sigma": self.sigma,
            "regime_label": self.regime_label.value if self.regime_label else None,
            "degenerate": self.degenerate,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------- reproduction numbers

def _reproduction_number(ip: IdeologyParams, lam: float, mu: float) -> float:
    dq = derived_quantities(ip, mu)
    return lam * ip.beta * dq.c_tilde / (mu * dq.big_d)


def r0_bare(p: ModelParams) -> float:
    """Basic reproduction number of the bare-bones model, (Lambda/mu) * Gamma."""
    return _reproduction_number(p.ideology1, p.lam, p.mu)


def reproduction_numbers_two(p: ModelParams) -> tuple[float, float]:
    if p.is_bare:
        raise ValueError("two-ideology model required")
    return (_reproduction_number(p.ideology1, p.lam, p.mu),
            _reproduction_number(p.ideology2, p.lam, p.mu))


def ngm_build(ip: IdeologyParams, mu: float, s_bar: float,
              cross_gain: float = 0.0, cross_loss: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(F, V)`` for the adopter classes ``(E, R)`` of one ideology.

    ``cross_gain`` (``delta * E1*`` when ideology two invades ``x*``) enters
    ``F[0, 0]``; ``cross_loss`` (``delta * E2**`` when ideology one invades
    ``x**``) enters ``V[0, 0]``.
    """
    if not s_bar > 0:
        raise ValueError("s_bar must be positive")
    if cross_gain < 0 or cross_loss < 0:
        raise ValueError("cross terms must be nonnegative")
    b = ip.beta * s_bar
    f = np.array([[cross_gain, ip.q_e * b],
                  [0.0, ip.q_r * b]])
    v = np.array([[mu + ip.d_e + ip.c_e + cross_loss, -ip.c_r],
                  [-ip.c_e, mu + ip.d_r + ip.c_r]])
    return f, v


def next_generation_matrix(f, v) -> np.ndarray:
    return linalg.right_divide(f, v)


def ngm_spectral_radius(ip: IdeologyParams, mu: float, s_bar: float,
                        cross_gain: float = 0.0, cross_loss: float = 0.0) -> float:
    f, v = ngm_build(ip, mu, s_bar, cross_gain, cross_loss)
    return linalg.spectral_radius(next_generation_matrix(f, v))


# ---------------------------------------------------------------- stability

def classify_eigenvalues(vals) -> Stability:
    re = np.real(vals)
    if np.all(re < -STABILITY_MARGIN):
        return Stability.STABLE
    if np.any(re > STABILITY_MARGIN):
        return Stability.UNSTABLE
    return Stability.MARGINAL


def local_stability(p: ModelParams, eq) -> tuple[np.ndarray, Stability]:
    """Jacobian spectrum at ``eq`` and its stability class (margin 1e-9)."""
    vals = linalg.eigenvalues(jacobian(p, eq))
    return vals, classify_eigenvalues(vals)


def residual(p: ModelParams, x) -> float:
    return float(np.max(np.abs(rhs(p, x))))


def _report(p: ModelParams, kind: EquilibriumKind, state) -> EquilibriumReport:
    state = np.asarray(state, dtype=float)
    vals, stab = local_stability(p, state)
    return EquilibriumReport(kind, state, vals, stab, residual(p, state))


# ---------------------------------------------------------------- equilibria

def _endemic_point(ip: IdeologyParams, lam: float, mu: float) -> tuple[float, float, float]:
    """(S*, E*, R*) of a single ideology; components negative when R0 < 1."""
    dq = derived_quantities(ip, mu)
    s_star = 1.0 / dq.gamma
    r0 = lam * dq.gamma / mu
    r_star = mu / ip.beta * (r0 - 1.0)
    e_star = (ip.beta / dq.gamma - (mu + ip.d_r)) / (mu + ip.d_e) * r_star
    return s_star, e_star, r_star


def ideology_free_state(p: ModelParams) -> np.ndarray:
    x = np.zeros(p.dim)
    x[0] = p.s0
    return x


def dominance_state(p: ModelParams, which: int) -> np.ndarray | None:
    """``x*`` (which=1) or ``x**`` (which=2) of the two-ideology model, None if R_i <= 1."""
    ip = p.ideology(which)
    if _reproduction_number(ip, p.lam, p.mu) <= 1.0:
        return None
    s, e, r = _endemic_point(ip, p.lam, p.mu)
    x = np.zeros(5)
    x[0] = s
    if which == 1:
        x[1], x[2] = e, r
    else:
        x[3], x[4] = e, r
    return x


def bare_endemic_state(p: ModelParams) -> np.ndarray | None:
    if r0_bare(p) <= 1.0:
        return None
    return np.array(_endemic_point(p.ideology1, p.lam, p.mu))


def equilibria_bare(p: ModelParams) -> list[EquilibriumReport]:
    """``x0`` always, and ``x* = (1/Gamma, E*, R*)`` when R0 > 1."""
    if not p.is_bare:
        raise ValueError("bare-bones model required")
    out = [_report(p, EquilibriumKind.IDEOLOGY_FREE, ideology_free_state(p))]
    x_star = bare_endemic_state(p)
    if x_star is not None:
        out.append(_report(p, EquilibriumKind.BARE_ENDEMIC, x_star))
    return out


def boundary_equilibria_two(p: ModelParams) -> list[EquilibriumReport]:
    """``x0``, plus ``x*`` iff R1 > 1 and ``x**`` iff R2 > 1 (valid for any delta)."""
    if p.is_bare:
        raise ValueError("two-ideology model required")
    out = [_report(p, EquilibriumKind.IDEOLOGY_FREE, ideology_free_state(p))]
    for which, kind in ((1, EquilibriumKind.DOMINANCE1), (2, EquilibriumKind.DOMINANCE2)):
        x = dominance_state(p, which)
        if x is not None:
            out.append(_report(p, kind, x))
    return out


# ---------------------------------------------------------------- invasion numbers

def _i2_delta_closed(p: ModelParams, x_star, delta: float) -> float:
    """Perron root of the 2x2 invasion matrix of ideology two at ``x*``."""
    ip = p.ideology2
    mu = p.mu
    dq = derived_quantities(ip, mu)
    s, e1 = x_star[0], x_star[1]
    m_e = mu + ip.d_e + ip.c_e
    m_r = mu + ip.d_r + ip.c_r
    g = ip.beta * s
    a = (delta * e1 * m_r + ip.q_e * g * ip.c_e) / dq.big_d
    b = (delta * e1 * ip.c_r + ip.q_e * g * m_e) / dq.big_d
    c = ip.q_r * g * ip.c_e / dq.big_d
    d = ip.q_r * g * m_e / dq.big_d
    return 0.5 * ((a + d) + math.sqrt((a - d) ** 2 + 4.0 * b * c))


def _i1_delta_closed(p: ModelParams, x_ss, delta: float) -> float:
    """Trace (= spectral radius, rank one) of ideology one's invasion matrix at ``x**``."""
    ip = p.ideology1
    mu = p.mu
    dq = derived_quantities(ip, mu)
    s, e2 = x_ss[0], x_ss[3]
    m_r = mu + ip.d_r + ip.c_r
    return (ip.beta * s * (dq.c_tilde + ip.q_r * delta * e2)
            / (dq.big_d + delta * e2 * m_r))


def invasion_numbers_delta(p: ModelParams, delta: float | None = None) -> tuple[float | None, float | None]:
    """Return ``(I1^delta, I2^delta)``; an entry is None when its dominance equilibrium is absent.

    ``I2^delta`` needs ``x*`` (R1 > 1); ``I1^delta`` needs ``x**`` (R2 > 1).
    ``delta`` defaults to ``p.delta``.
    """
    if p.is_bare:
        raise ValueError("two-ideology model required")
    delta = p.delta if delta is None else float(delta)
    x_star = dominance_state(p, 1)
    x_ss = dominance_state(p, 2)
    i2 = None if x_star is None else _i2_delta_closed(p, x_star, delta)
    i1 = None if x_ss is None else _i1_delta_closed(p, x_ss, delta)
    return i1, i2


def invasion_numbers_ngm(p: ModelParams, delta: float | None = None) -> tuple[float | None, float | None]:
    """Same as :func:`invasion_numbers_delta`, via spectral radius of F V^-1."""
    delta = p.delta if delta is None else float(delta)
    x_star = dominance_state(p, 1)
    x_ss = dominance_state(p, 2)
    i2 = i1 = None
    if x_star is not None:
        i2 = ngm_spectral_radius(p.ideology2, p.mu, x_star[0], cross_gain=delta * x_star[1])
    if x_ss is not None:
        i1 = ngm_spectral_radius(p.ideology1, p.mu, x_ss[0], cross_loss=delta * x_ss[3])
    return i1, i2


def _switch_coupling(ip: IdeologyParams, mu: float) -> float:
    return ip.c_e * (ip.c_r + ip.q_e * (mu + ip.d_r))


def _threshold(numer: float, denom: float, scale: float) -> Threshold:
    # denom below round-off relative to its terms means the line never meets 1
    if abs(denom) <= 1e-14 * scale:
        return Threshold(None, ThresholdStatus.UNDEFINED)
    value = numer / denom
    if value <= 0:
        return Threshold(value, ThresholdStatus.NON_POSITIVE)
    if denom < 0:
        return Threshold(value, ThresholdStatus.NO_CROSSING)
    return Threshold(value, ThresholdStatus.OK)


def delta_thresholds(p: ModelParams) -> Thresholds:
    """``delta*`` (I2^delta = 1 at x*), ``delta**`` (I1^delta = 1 at x**) and sigma.

    Both follow from ``det(I - N) = 0``, which is linear in delta.  A
    threshold is UNDEFINED when its equilibrium is absent.
    """
    if p.is_bare:
        raise ValueError("two-ideology model required")
    mu = p.mu
    r1, r2 = reproduction_numbers_two(p)
    i1p, i2p = p.ideology1, p.ideology2
    dq1 = derived_quantities(i1p, mu)
    dq2 = derived_quantities(i2p, mu)

    x_star = dominance_state(p, 1)
    if x_star is None:
        d_star = Threshold(None, ThresholdStatus.UNDEFINED)
    else:
        k2 = _switch_coupling(i2p, mu)
        t1 = i2p.q_r * dq2.big_d * (r1 - r2)
        t2 = k2 * r1
        d_star = _threshold(dq2.c_tilde * dq2.big_d * (r1 - r2),
                            x_star[1] * (t1 + t2),
                            x_star[1] * (abs(t1) + abs(t2)))

    x_ss = dominance_state(p, 2)
    if x_ss is None:
        d_ss = Threshold(None, ThresholdStatus.UNDEFINED)
    else:
        k1 = _switch_coupling(i1p, mu)
        t1 = i1p.q_r * dq1.big_d * (r2 - r1)
        t2 = k1 * r2
        d_ss = _threshold(dq1.c_tilde * dq1.big_d * (r1 - r2),
                          x_ss[3] * (t1 + t2),
                          x_ss[3] * (abs(t1) + abs(t2)))

    sigma = None
    if d_star.positive and d_ss.positive:
        sigma = d_ss.value - d_star.value
    return Thresholds(d_star, d_ss, sigma)


# ---------------------------------------------------------------- regimes

def _near(a: float, b: float) -> bool:
    return abs(a - b) <= DEGENERATE_RTOL * max(abs(a), abs(b), 1e-300)


def classify_regime(p: ModelParams) -> RegimeReport:
    """Label the parameter set by the relative order of R1, R2, 1, delta*, delta**.

    The Situation 2 case split (2A/2B/2C) depends only on the thresholds, not
    on ``p.delta``.  ``degenerate`` flags measure-zero boundaries (R1 == R2,
    R_i == 1, delta equal to a threshold, delta* == delta**).
    """
    if p.is_bare:
        r0 = r0_bare(p)
        notes = []
        degenerate = _near(r0, 1.0)
        if degenerate:
            notes.append("R0 = 1")
        return RegimeReport(r0, None, None, None, None, 0.0, None, None, None,
                            None, degenerate, notes)

    r1, r2 = reproduction_numbers_two(p)
    i1, i2 = invasion_numbers_delta(p)
    th = delta_thresholds(p)
    notes: list[str] = []
    degenerate = False
    for name, val in (("R1", r1), ("R2", r2)):
        if _near(val, 1.0):
            degenerate = True
            notes.append(f"{name} = 1")
    if r1 > 1 and r2 > 1 and _near(r1, r2):
        degenerate = True
        notes.append("R1 = R2")
    for name, t in (("delta*", th.delta_star), ("delta**", th.delta_star_star)):
        if t.value is not None and t.value > 0 and _near(p.delta, t.value):
            degenerate = True
            notes.append(f"delta = {name}")

    if max(r1, r2) <= 1.0:
        label = Regime.ALL_SUBCRITICAL
    elif r2 <= 1.0 < r1:
        label = Regime.SITUATION3
    elif r1 <= 1.0 < r2:
        label = Regime.SITUATION4
    elif r1 <= r2:
        label = Regime.SITUATION1
    else:
        dss = th.delta_star_star
        ds = th.delta_star
        if dss.status is ThresholdStatus.NON_POSITIVE or dss.status is ThresholdStatus.UNDEFINED:
            label = Regime.SITUATION2A
            if dss.value is not None and dss.value == 0:
                degenerate = True
                notes.append("delta** = 0")
        elif dss.value < ds.value:
            label = Regime.SITUATION2B
        else:
            label = Regime.SITUATION2C
            if _near(dss.value, ds.value):
                degenerate = True
                notes.append("delta* = delta**")
    return RegimeReport(None, r1, r2, i1, i2, p.delta, th.delta_star, th.delta_star_star,
                        th.sigma, label, degenerate, notes)


@dataclass(frozen=True)
class Prediction:
    """Local picture implied by the regime at the model's delta."""

    x_star: Stability | None
    x_star_star: Stability | None
    coexistence: Stability | None  # None means no coexistence equilibrium expected


def predicted_picture(report: RegimeReport) -> Prediction:
    """Stabilities of x*, x** and the coexistence equilibrium implied by the invasion numbers.

    Boundary equilibria: stable iff the opposing invasion number is < 1.  The
    coexistence branch exists for delta strictly between the positive
    thresholds (stable if x*, x** are both unstable there, unstable if both are
    stable), or above delta* when delta** never crosses (Situations 2A and 3).
    """
    if report.regime_label is None:
        raise ValueError("two-ideology report required")
    label = report.regime_label
    delta = report.delta

    def stab(i):
        if i is None:
            return None
        if _near(i, 1.0):
            return Stability.MARGINAL
        return Stability.STABLE if i < 1 else Stability.UNSTABLE

    xs = stab(report.i2_delta)
    xss = stab(report.i1_delta)
    coex = None
    ds = report.delta_star.value if report.delta_star and report.delta_star.positive else None
    dss = report.delta_star_star.value if report.delta_star_star and report.delta_star_star.positive else None
    if label in (Regime.SITUATION2A, Regime.SITUATION3):
        if ds is not None and delta > ds:
            coex = Stability.STABLE
    elif label is Regime.SITUATION2B:
        if dss < delta < ds:
            coex = Stability.UNSTABLE
    elif label is Regime.SITUATION2C:
        if ds < delta < dss:
            coex = Stability.STABLE
    return Prediction(xs, xss, coex)


# ---------------------------------------------------------------- coexistence

NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-10
POSITIVE_FLOOR = 1e-10
DISTINCT_TOL = 1e-6
POLISH_STEPS = 3
BOUNDARY_RTOL = 1e-8


def coexistence_starts(p: ModelParams) -> list[np.ndarray]:
    """Deterministic multistart seeds.

    S takes 9 interior values of (0, Lambda/mu); the adopter components are
    25/50/75% blends of the two dominance equilibria.  An absent dominance
    equilibrium borrows the adopter levels of the present one (or 0.1 *
    Lambda/mu each when both are absent).
    """
    s0 = p.s0
    x_star = dominance_state(p, 1)
    x_ss = dominance_state(p, 2)
    fallback = np.full(2, 0.1 * s0)
    adopt1 = x_star[1:3] if x_star is not None else None
    adopt2 = x_ss[3:5] if x_ss is not None else None
    if adopt1 is None:
        adopt1 = fallback if adopt2 is None else adopt2
    if adopt2 is None:
        adopt2 = adopt1
    starts = []
    for k in range(1, 10):
        s = s0 * k / 10.0
        for w in (0.25, 0.5, 0.75):
            x = np.empty(5)
            x[0] = s
            # weight w on ideology one, (1 - w) on ideology two
            x[1:3] = w * adopt1
            x[3:5] = (1.0 - w) * adopt2
            starts.append(x)
    return starts


@dataclass(frozen=True)
class NewtonResult:
    state: np.ndarray
    converged: bool
    iterations: int
    residual: float


def damped_newton(p: ModelParams, x0, max_iter: int = NEWTON_MAX_ITER,
                  tol: float = NEWTON_TOL) -> NewtonResult:
    """Damped Newton on the 5-dim right-hand side with the analytical Jacobian.

    Steps are halved until the max-norm residual decreases.  The target
    residual is ``tol * max(1, Lambda)``.
    """
    x = np.array(x0, dtype=float)
    goal = tol * max(1.0, p.lam)
    fx = rhs_two(p, x)
    res = float(np.max(np.abs(fx)))
    polish = 0
    for it in range(max_iter):
        # a few extra steps past the goal push spurious near-boundary
        # components down to round-off level
        if res <= goal:
            polish += 1
            if polish > POLISH_STEPS or res == 0.0:
                return NewtonResult(x, True, it, res)
        try:
            step = linalg.solve_linear(jacobian_two(p, x), -fx)
        except linalg.SingularMatrix:
            return NewtonResult(x, False, it, res)
        lam = 1.0
        for _ in range(40):
            trial = x + lam * step
            f_trial = rhs_two(p, trial)
            r_trial = float(np.max(np.abs(f_trial)))
            if r_trial < res:
                break
            lam *= 0.5
        else:
            return NewtonResult(x, res <= goal, it, res)
        x, fx, res = trial, f_trial, r_trial
    return NewtonResult(x, res <= goal, max_iter, res)


def _is_interior(p: ModelParams, x, boundary) -> bool:
    if not np.all(x > POSITIVE_FLOOR):
        return False
    far = BOUNDARY_RTOL * p.s0
    return all(np.max(np.abs(x - b)) > far for b in boundary)


def coexistence_equilibria(p: ModelParams) -> list[EquilibriumReport]:
    """All distinct interior roots found by the multistart damped-Newton search.

    Ordered by the index of the first start that reached them.  An empty list
    is a heuristic certificate of absence: every start either converged to a
    boundary point or left the positive orthant.  Raises NoConvergence when no
    start converged anywhere.
    """
    if p.is_bare:
        raise ValueError("two-ideology model required")
    boundary = [ideology_free_state(p)]
    boundary += [x for x in (dominance_state(p, 1), dominance_state(p, 2)) if x is not None]
    found: list[np.ndarray] = []
    any_settled = False
    for x0 in coexistence_starts(p):
        res = damped_newton(p, x0)
        if res.converged:
            any_settled = True
            if _is_interior(p, res.state, boundary):
                if all(np.max(np.abs(res.state - y)) > DISTINCT_TOL for y in found):
                    found.append(res.state)
        elif np.any(res.state < 0):
            any_settled = True  # exited the positive orthant
    if not found and not any_settled:
        raise NoConvergence("damped Newton failed from every start")
    return [_report(p, EquilibriumKind.COEXISTENCE, x) for x in found]


def coexistence_equilibrium(p: ModelParams) -> EquilibriumReport | None:
    """The first interior equilibrium found, or None when the search certifies absence."""
    roots = coexistence_equilibria(p)
    return roots[0] if roots else None


# ---------------------------------------------------------------- convenience

def all_equilibria(p: ModelParams, with_coexistence: bool = True) -> list[EquilibriumReport]:
    if p.is_bare:
        return equilibria_bare(p)
    out = boundary_equilibria_two(p)
    if with_coexistence and p.delta > 0:
        out.extend(coexistence_equilibria(p))
    return out


def nearest_equilibrium(p: ModelParams, x, candidates: list[EquilibriumReport] | None = None):
    candidates = all_equilibria(p) if candidates is None else candidates
    x = np.asarray(x, dtype=float)
    dists = [float(np.max(np.abs(c.state - x))) for c in candidates]
    k = int(np.argmin(dists))
    return candidates[k], dists[k]
