"""Parameter/state types, vector fields and Jacobians of the radicalization models.

Three systems share one parameter type:

* bare-bones: a single ideology, state ``(S, E, R)``;
* two ideologies with ``delta == 0``, state ``(S, E1, R1, E2, R2)``;
* two ideologies with cross-interaction ``delta > 0`` (ideology one extremists
  convert to ideology two at rate ``delta * E1 * E2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

BARE_LABELS = ("S", "E", "R")
TWO_LABELS = ("S", "E1", "R1", "E2", "R2")


class ValidationError(ValueError):
    """Invalid parameters or state; ``errors`` maps field path -> message."""

    def __init__(self, errors: dict[str, str]):
        self.errors = dict(errors)
        detail = "; ".join(f"{k}: {v}" for k, v in self.errors.items())
        super().__init__(f"invalid parameters: {detail}")


def _check_positive(errors, prefix, **values):
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value)):
            errors[prefix + name] = f"must be a finite number, got {value!r}"
        elif value <= 0:
            errors[prefix + name] = f"must be > 0, got {value!r}"


@dataclass(frozen=True)
class IdeologyParams:
    """Rates for one ideology.

    ``q_r`` is not stored; it is always ``1 - q_e``.
    """

    beta: float
    d_e: float
    d_r: float
    c_e: float
    c_r: float
    q_e: float

    def __post_init__(self):
        errors = self.validation_errors()
        if errors:
            raise ValidationError(errors)

    def validation_errors(self, prefix: str = "") -> dict[str, str]:
        errors: dict[str, str] = {}
        _check_positive(errors, prefix, beta=self.beta, d_e=self.d_e, d_r=self.d_r,
                        c_e=self.c_e, c_r=self.c_r)
        q = self.q_e
        if not (isinstance(q, (int, float)) and math.isfinite(q)) or not 0.0 <= q <= 1.0:
            errors[prefix + "q_e"] = f"must lie in [0, 1], got {q!r}"
        return errors

    @property
    def q_r(self) -> float:
        return 1.0 - self.q_e


@dataclass(frozen=True)
class ModelParams:
    """Population-level parameters plus one or two ideologies.

    ``ideology2 is None`` selects the bare-bones model; ``delta`` is only
    meaningful (and only allowed to be nonzero) when ``ideology2`` is given.
    """

    lam: float
    mu: float
    ideology1: IdeologyParams
    ideology2: IdeologyParams | None = None
    delta: float = 0.0

    def __post_init__(self):
        errors: dict[str, str] = {}
        _check_positive(errors, "", **{"lambda": self.lam, "mu": self.mu})
        d = self.delta
        if not (isinstance(d, (int, float)) and math.isfinite(d)) or d < 0:
            errors["delta"] = f"must be >= 0, got {d!r}"
        elif d > 0 and self.ideology2 is None:
            errors["delta"] = "cross-interaction requires ideology2"
        if errors:
            raise ValidationError(errors)

    @property
    def is_bare(self) -> bool:
        return self.ideology2 is None

    @property
    def dim(self) -> int:
        return 3 if self.ideology2 is None else 5

    @property
    def s0(self) -> float:
        """Susceptible level of the ideology-free equilibrium, Lambda/mu."""
        return self.lam / self.mu

    @property
    def labels(self) -> tuple[str, ...]:
        return BARE_LABELS if self.is_bare else TWO_LABELS

    def ideology(self, i: int) -> IdeologyParams:
        if i == 1:
            return self.ideology1
        if i == 2 and self.ideology2 is not None:
            return self.ideology2
        raise ValueError(f"no ideology {i} in this model")

    def with_changes(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedQuantities:
    c_tilde: float
    big_d: float
    gamma: float


def derived_quantities(ip: IdeologyParams, mu: float) -> DerivedQuantities:
    """Return ``(c~, D, Gamma)`` for one ideology."""
    m_e = mu + ip.d_e + ip.c_e
    m_r = mu + ip.d_r + ip.c_r
    c_tilde = ip.c_e + ip.q_r * (mu + ip.d_e)
    big_d = m_r * m_e - ip.c_e * ip.c_r
    return DerivedQuantities(c_tilde=c_tilde, big_d=big_d, gamma=ip.beta * c_tilde / big_d)


def total(x) -> float:
    return float(np.sum(x))


def _as_state(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected a state of length {n}, got shape {x.shape}")
    return x


def vector_field(p: ModelParams) -> Callable[[float, np.ndarray], np.ndarray]:
    """Return ``f(t, x)`` for the model selected by ``p`` (autonomous)."""
    lam, mu = p.lam, p.mu
    i1 = p.ideology1
    b1, qe1, qr1, ce1, cr1 = i1.beta, i1.q_e, i1.q_r, i1.c_e, i1.c_r
    me1 = mu + i1.d_e + i1.c_e
    mr1 = mu + i1.d_r + i1.c_r

    if p.ideology2 is None:
        def f_bare(t, x):
            s, e, r = x
            inc = b1 * s * r
            return np.array([
                lam - mu * s - inc,
                qe1 * inc - me1 * e + cr1 * r,
                qr1 * inc + ce1 * e - mr1 * r,
            ])
        return f_bare

    i2 = p.ideology2
    b2, qe2, qr2, ce2, cr2 = i2.beta, i2.q_e, i2.q_r, i2.c_e, i2.c_r
    me2 = mu + i2.d_e + i2.c_e
    mr2 = mu + i2.d_r + i2.c_r
    delta = p.delta

    def f_two(t, x):
        s, e1, r1, e2, r2 = x
        inc1 = b1 * s * r1
        inc2 = b2 * s * r2
        conv = delta * e1 * e2
        return np.array([
            lam - mu * s - inc1 - inc2,
            qe1 * inc1 - me1 * e1 + cr1 * r1 - conv,
            qr1 * inc1 + ce1 * e1 - mr1 * r1,
            qe2 * inc2 - me2 * e2 + cr2 * r2 + conv,
            qr2 * inc2 + ce2 * e2 - mr2 * r2,
        ])
    return f_two


def rhs_bare(p: ModelParams, x) -> np.ndarray:
    """Right-hand side ``(S', E', R')`` of the single-ideology model."""
    if not p.is_bare:
        raise ValueError("rhs_bare needs a model without ideology2")
    return vector_field(p)(0.0, _as_state(x, 3))


def rhs_two(p: ModelParams, x) -> np.ndarray:
    """Right-hand side of the two-ideology model (cross term included when delta > 0)."""
    if p.is_bare:
        raise ValueError("rhs_two needs ideology2")
    return vector_field(p)(0.0, _as_state(x, 5))


def rhs(p: ModelParams, x) -> np.ndarray:
    return vector_field(p)(0.0, _as_state(x, p.dim))


def jacobian_bare(p: ModelParams, x) -> np.ndarray:
    if not p.is_bare:
        raise ValueError("jacobian_bare needs a model without ideology2")
    s, e, r = _as_state(x, 3)
    mu, ip = p.mu, p.ideology1
    b = ip.beta
    return np.array([
        [-mu - b * r, 0.0, -b * s],
        [ip.q_e * b * r, -(mu + ip.d_e + ip.c_e), ip.q_e * b * s + ip.c_r],
        [ip.q_r * b * r, ip.c_e, ip.q_r * b * s - (mu + ip.d_r + ip.c_r)],
    ])


def jacobian_two(p: ModelParams, x) -> np.ndarray:
    if p.is_bare:
        raise ValueError("jacobian_two needs ideology2")
    s, e1, r1, e2, r2 = _as_state(x, 5)
    mu, d = p.mu, p.delta
    a, c = p.ideology1, p.ideology2
    b1, b2 = a.beta, c.beta
    return np.array([
        [-mu - b1 * r1 - b2 * r2, 0.0, -b1 * s, 0.0, -b2 * s],
        [a.q_e * b1 * r1, -(mu + a.d_e + a.c_e) - d * e2, a.q_e * b1 * s + a.c_r, -d * e1, 0.0],
        [a.q_r * b1 * r1, a.c_e, a.q_r * b1 * s - (mu + a.d_r + a.c_r), 0.0, 0.0],
        [c.q_e * b2 * r2, d * e2, 0.0, -(mu + c.d_e + c.c_e) + d * e1, c.q_e * b2 * s + c.c_r],
        [c.q_r * b2 * r2, 0.0, 0.0, c.c_e, c.q_r * b2 * s - (mu + c.d_r + c.c_r)],
    ])


def jacobian(p: ModelParams, x) -> np.ndarray:
    return jacobian_bare(p, x) if p.is_bare else jacobian_two(p, x)


def check_admissible(p: ModelParams, x, name: str = "initial") -> np.ndarray:
    """Validate a user-supplied state: right length, finite, componentwise >= 0."""
    arr = np.asarray(x, dtype=float)
    if arr.shape != (p.dim,):
        raise ValidationError({name: f"expected {p.dim} components {p.labels}, got {arr.shape[0] if arr.ndim == 1 else arr.shape}"})
    errors = {}
    for label, v in zip(p.labels, arr):
        if not math.isfinite(v):
            errors[f"{name}.{label}"] = "must be finite"
        elif v < 0:
            errors[f"{name}.{label}"] = f"must be >= 0, got {v!r}"
    if errors:
        raise ValidationError(errors)
    return arr
