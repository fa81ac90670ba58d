"""Lyapunov certificates for the three models and a sampled monotonicity check."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .analysis import bare_endemic_state, dominance_state, ideology_free_state
from .model import IdeologyParams, ModelParams, derived_quantities

DECREASE_RTOL = 1e-9
WEIGHT_RTOL = 1e-10


class DomainError(ValueError):
    pass


class DegenerateWeights(ArithmeticError):
    pass


class LyapunovKind(str, enum.Enum):
    BARE_U = "bare_U"             # ideology-free equilibrium, single ideology
    BARE_W = "bare_W"             # endemic equilibrium, single ideology
    TWO_U = "two_U"               # ideology-free equilibrium, delta = 0
    TWO_W_STAR = "two_W_star"     # x*, delta = 0
    TWO_W_STAR_STAR = "two_W_star_star"  # x**, delta = 0
    CROSS_U = "cross_U"           # ideology-free equilibrium, any delta
    CROSS_W = "cross_W"           # x**, any delta (same function as TWO_W_STAR_STAR)


def g(x: float) -> float:
    """``x - 1 - ln(x)``; nonnegative, zero only at 1."""
    if not x > 0:
        raise DomainError(f"g needs a positive argument, got {x!r}")
    u = x - 1.0
    return u - math.log1p(u)


def _scaled_g(anchor: float, value: float, label: str) -> float:
    if not value > 0:
        raise DomainError(f"{label} must be positive for this certificate, got {value!r}")
    return anchor * g(value / anchor)


def _adopter_weights(ip: IdeologyParams, mu: float) -> tuple[float, float]:
    """``(c_E/c~, (mu+d_E+c_E)/c~)``: the linear weights used for an absent ideology."""
    ct = derived_quantities(ip, mu).c_tilde
    return ip.c_e / ct, (mu + ip.d_e + ip.c_e) / ct


def solve_weights(p: ModelParams, anchor, ideology: int | None = None) -> tuple[float, float]:
    """Solve ``A q_E + B q_R = 1`` and ``B c_E E* = A (c_R R* + q_E beta S* R*)``.

    ``anchor`` is the bare endemic point or a dominance equilibrium; for the
    five-compartment model the established ideology is inferred from it
    unless given.  The solve is checked against ``A = c_E/c~``,
    ``B = (mu+d_E+c_E)/c~``.
    """
    anchor = np.asarray(anchor, dtype=float)
    if anchor.size == 3:
        ip, (s, e, r) = p.ideology1, anchor
    else:
        if ideology is None:
            ideology = 1 if anchor[1] > 0 else 2
        ip = p.ideology(ideology)
        s = anchor[0]
        e, r = (anchor[1], anchor[2]) if ideology == 1 else (anchor[3], anchor[4])
    if not (s > 0 and e > 0 and r > 0):
        raise DegenerateWeights("anchor must have positive S, E and R for the established ideology")
    system = np.array([[ip.q_e, ip.q_r],
                       [ip.c_r * r + ip.q_e * ip.beta * s * r, -ip.c_e * e]])
    try:
        a, b = linalg.solve_linear(system, np.array([1.0, 0.0]))
    except linalg.SingularMatrix as exc:
        raise DegenerateWeights(str(exc)) from exc
    a_ref, b_ref = _adopter_weights(ip, p.mu)
    if abs(a - a_ref) > WEIGHT_RTOL * abs(a_ref) or abs(b - b_ref) > WEIGHT_RTOL * abs(b_ref):
        raise DegenerateWeights(f"weights ({a}, {b}) disagree with closed form ({a_ref}, {b_ref})")
    return float(a), float(b)


@dataclass(frozen=True)
class LyapunovSpec:
    kind: LyapunovKind
    params: ModelParams
    anchor: np.ndarray
    weights: tuple[float, float] | None = None

    @property
    def strict_condition(self) -> bool | None:
        """For CROSS_W: ``c_E2/c~2 < c_E1/c~1`` (the dissipation condition)."""
        if self.kind is not LyapunovKind.CROSS_W:
            return None
        a1, _ = _adopter_weights(self.params.ideology1, self.params.mu)
        return bool(self.weights[0] < a1)

    @property
    def relaxed_condition(self) -> bool | None:
        """For CROSS_W: ``A <= c_E1/c~1 / (1 - mu E2** / Lambda)``, enough on the invariant region."""
        if self.kind is not LyapunovKind.CROSS_W:
            return None
        p = self.params
        a1, _ = _adopter_weights(p.ideology1, p.mu)
        return bool(self.weights[0] <= a1 / (1.0 - p.mu * self.anchor[3] / p.lam))


def lyapunov_spec(kind: LyapunovKind | str, p: ModelParams) -> LyapunovSpec:
    """Build the certificate of ``kind`` for ``p`` (anchor and weights included)."""
    kind = LyapunovKind(kind)
    if kind in (LyapunovKind.BARE_U, LyapunovKind.BARE_W):
        if not p.is_bare:
            raise ValueError(f"{kind.value} needs the bare-bones model")
    elif p.is_bare:
        raise ValueError(f"{kind.value} needs the two-ideology model")
    if kind in (LyapunovKind.TWO_U, LyapunovKind.TWO_W_STAR, LyapunovKind.TWO_W_STAR_STAR) and p.delta != 0:
        raise ValueError(f"{kind.value} is a certificate for delta = 0")

    if kind in (LyapunovKind.BARE_U, LyapunovKind.TWO_U, LyapunovKind.CROSS_U):
        return LyapunovSpec(kind, p, ideology_free_state(p))
    if kind is LyapunovKind.BARE_W:
        anchor = bare_endemic_state(p)
        if anchor is None:
            raise DegenerateWeights("no endemic equilibrium (R0 <= 1)")
        return LyapunovSpec(kind, p, anchor, solve_weights(p, anchor))
    which = 1 if kind is LyapunovKind.TWO_W_STAR else 2
    anchor = dominance_state(p, which)
    if anchor is None:
        raise DegenerateWeights(f"dominance equilibrium of ideology {which} does not exist")
    return LyapunovSpec(kind, p, anchor, solve_weights(p, anchor, which))


def lyapunov_value(spec: LyapunovSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    p, k, anc = spec.params, spec.kind, spec.anchor
    mu = p.mu

    if k is LyapunovKind.CROSS_U:
        # no susceptible term: only positive semidefinite (zero on the whole S axis)
        total = 0.0
        for ip, e, r in ((p.ideology1, x[1], x[2]), (p.ideology2, x[3], x[4])):
            total += e + (mu + ip.d_e + ip.c_e) / ip.c_e * r
        return total

    value = _scaled_g(anc[0], x[0], "S")
    if k in (LyapunovKind.BARE_U, LyapunovKind.TWO_U):
        pairs = [(p.ideology1, x[1], x[2])]
        if k is LyapunovKind.TWO_U:
            pairs.append((p.ideology2, x[3], x[4]))
        for ip, e, r in pairs:
            wa, wb = _adopter_weights(ip, mu)
            value += wa * e + wb * r
        return value

    a, b = spec.weights
    if k is LyapunovKind.BARE_W:
        established, absent = (1, 2), None
    elif k is LyapunovKind.TWO_W_STAR:
        established, absent = (1, 2), (p.ideology2, x[3], x[4])
    else:
        established, absent = (3, 4), (p.ideology1, x[1], x[2])
    ie, ir = established
    value += a * _scaled_g(anc[ie], x[ie], "E") + b * _scaled_g(anc[ir], x[ir], "R")
    if absent is not None:
        ip, e, r = absent
        wa, wb = _adopter_weights(ip, mu)
        value += wa * e + wb * r
    return value


@dataclass(frozen=True)
class DecreaseReport:
    passed: bool
    samples: int
    max_increase: float
    worst_index: int | None
    initial_value: float
    final_value: float


def decrease_check(spec: LyapunovSpec, trajectory, rtol: float = DECREASE_RTOL) -> DecreaseReport:
    """Check the certificate is nonincreasing over consecutive samples.

    ``trajectory`` is a Trajectory or an array of states in time order.  A
    step passes when its increase is at most ``rtol * (1 + |value|)``.
    """
    states = getattr(trajectory, "states", trajectory)
    values = np.array([lyapunov_value(spec, x) for x in states])
    if values.size < 2:
        v = float(values[0]) if values.size else 0.0
        return DecreaseReport(True, int(values.size), 0.0, None, v, v)
    diffs = np.diff(values)
    allowed = rtol * (1.0 + np.abs(values[:-1]))
    worst = int(np.argmax(diffs - allowed))
    passed = bool(np.all(diffs <= allowed))
    return DecreaseReport(passed, int(values.size), float(diffs.max()),
                          None if passed else worst, float(values[0]), float(values[-1]))
