"""Randomized numerical checks of the global-stability theorems.

Random initial conditions come from SplitMix64 so a (scenario, seed) pair
reproduces the same starts in any implementation:

* ``state = state + 0x9E3779B97F4A7C15 (mod 2^64)``;
  ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``;
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``; output ``z ^ (z >> 31)``;
* a uniform double is ``(u64 >> 11) * 2^-53``;
* a start draws each component uniformly on ``[0, Lambda/mu)`` in compartment
  order and is rejected until the total is ``<= Lambda/mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import analysis
from .integrate import (
    IntegrationError,
    IntegratorConfig,
    convergence_check,
    integrate,
    invariant_region_check,
)
from .lyapunov import LyapunovKind, decrease_check, lyapunov_spec
from .model import ModelParams

MASK64 = (1 << 64) - 1
DEFAULT_T_END = 5000.0
CONVERGENCE_TOL = 1e-6


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def sample_in_region(rng: SplitMix64, p: ModelParams, max_tries: int = 1_000_000) -> np.ndarray:
    """Uniform draw from ``{x >= 0, sum(x) <= Lambda/mu}`` by rejection."""
    cap = p.s0
    for _ in range(max_tries):
        x = np.array([cap * rng.random() for _ in range(p.dim)])
        if x.sum() <= cap:
            return x
    raise RuntimeError("rejection sampling did not produce a start")


@dataclass(frozen=True)
class Theorem:
    """The global-stability result that applies to a parameter set, if any."""

    name: str
    target: str  # "x0", "x*", "x**"
    state: np.ndarray
    certificate: LyapunovKind
    hypotheses: dict


def applicable_theorem(p: ModelParams) -> Theorem | None:
    """Pick the global-stability theorem whose hypotheses ``p`` satisfies."""
    if p.is_bare:
        r0 = analysis.r0_bare(p)
        if r0 <= 1:
            return Theorem("bare x0 GAS", "x0", analysis.ideology_free_state(p),
                           LyapunovKind.BARE_U, {"R0": r0})
        return Theorem("bare x* GAS", "x*", analysis.bare_endemic_state(p),
                       LyapunovKind.BARE_W, {"R0": r0})

    r1, r2 = analysis.reproduction_numbers_two(p)
    hyp = {"R1": r1, "R2": r2, "delta": p.delta}
    if max(r1, r2) <= 1:
        kind = LyapunovKind.TWO_U if p.delta == 0 else LyapunovKind.CROSS_U
        return Theorem("x0 GAS", "x0", analysis.ideology_free_state(p), kind, hyp)
    if p.delta == 0:
        if r1 > max(1.0, r2):
            return Theorem("competitive exclusion, x* GAS", "x*", analysis.dominance_state(p, 1),
                           LyapunovKind.TWO_W_STAR, hyp)
        if r2 > max(1.0, r1):
            return Theorem("competitive exclusion, x** GAS", "x**", analysis.dominance_state(p, 2),
                           LyapunovKind.TWO_W_STAR_STAR, hyp)
        return None
    if r2 > max(1.0, r1):
        spec = lyapunov_spec(LyapunovKind.CROSS_W, p)
        hyp = dict(hyp, strict_condition=spec.strict_condition, relaxed_condition=spec.relaxed_condition)
        if spec.strict_condition:
            return Theorem("cross-interaction x** GAS", "x**", spec.anchor, LyapunovKind.CROSS_W, hyp)
    return None


@dataclass
class TrialResult:
    index: int
    initial: list[float]
    region_ok: bool
    converged: bool | None
    entry_time: float | None
    lyapunov_ok: bool | None
    max_lyapunov_increase: float | None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (self.error is None and self.region_ok
                and self.converged is not False and self.lyapunov_ok is not False)


@dataclass
class VerifyReport:
    theorem: str | None
    target: str | None
    hypotheses: dict = field(default_factory=dict)
    trials: list[TrialResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.trials)

    def counts(self) -> dict:
        n = len(self.trials)
        return {
            "trials": n,
            "passed": sum(t.passed for t in self.trials),
            "region_ok": sum(t.region_ok for t in self.trials),
            "converged": sum(bool(t.converged) for t in self.trials),
            "lyapunov_ok": sum(bool(t.lyapunov_ok) for t in self.trials),
            "errors": sum(t.error is not None for t in self.trials),
        }

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "target": self.target,
            "hypotheses": {k: (v if isinstance(v, bool) else float(v)) for k, v in self.hypotheses.items()},
            "passed": self.passed,
            "counts": self.counts(),
            "notes": list(self.notes),
            "failures": [
                {"trial": t.index, "initial": t.initial, "region_ok": t.region_ok,
                 "converged": t.converged, "lyapunov_ok": t.lyapunov_ok,
                 "max_lyapunov_increase": t.max_lyapunov_increase, "error": t.error}
                for t in self.trials if not t.passed
            ],
        }


def run_trial(p: ModelParams, x0, theorem: Theorem | None, t_end: float,
              cfg: IntegratorConfig, index: int = 0, tol: float = CONVERGENCE_TOL) -> TrialResult:
    x0 = np.asarray(x0, dtype=float)
    try:
        traj = integrate(p, x0, (0.0, t_end), cfg)
    except IntegrationError as exc:
        return TrialResult(index, x0.tolist(), False, None, None, None, None, f"{type(exc).__name__}: {exc}")
    region = invariant_region_check(traj, p)
    converged = entry = lyap_ok = max_inc = None
    if theorem is not None:
        converged, entry = convergence_check(traj, theorem.state, tol)
        spec = lyapunov_spec(theorem.certificate, p)
        report = decrease_check(spec, traj)
        lyap_ok, max_inc = report.passed, report.max_increase
    return TrialResult(index, x0.tolist(), region.passed, converged, entry, lyap_ok, max_inc)


def verify(p: ModelParams, trials: int, seed: int = 0, t_end: float = DEFAULT_T_END,
           cfg: IntegratorConfig | None = None, initial=None) -> VerifyReport:
    """Run ``trials`` seeded starts (the first one is ``initial`` when given).

    Every trial checks the invariant-region bounds; when a global-stability
    theorem applies, it also checks convergence to its equilibrium (max-norm
    1e-6 by ``t_end``) and monotone decrease of its Lyapunov function.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cfg = cfg or IntegratorConfig()
    theorem = applicable_theorem(p)
    if theorem is None:
        report = VerifyReport(None, None)
        report.notes.append("no global-stability theorem applies; only invariant-region checks run")
    else:
        report = VerifyReport(theorem.name, theorem.target, dict(theorem.hypotheses))
    rng = SplitMix64(seed)
    for k in range(trials):
        if k == 0 and initial is not None:
            x0 = np.asarray(initial, dtype=float)
        else:
            x0 = sample_in_region(rng, p)
            if theorem is not None and theorem.target != "x0":
                # g-terms need the established ideology strictly positive
                while np.any(x0 == 0):
                    x0 = sample_in_region(rng, p)
        report.trials.append(run_trial(p, x0, theorem, t_end, cfg, k))
    return report
