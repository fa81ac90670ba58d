"""Dormand-Prince 5(4) integration and trajectory-level checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, check_admissible, vector_field

# Dormand-Prince 5(4) tableau; the 7th stage is the FSAL evaluation at the new point.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th- and embedded 4th-order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension, y(t + th*h) = y + h * K.T @ (_P @ [th, th^2, th^3, th^4])
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

# PI controller exponents (Hairer & Wanner, DOPRI5 defaults for beta=0.04)
_ALPHA = 0.2 - 0.04 * 0.75
_BETA = 0.04
_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0

NEGATIVE_TOLERANCE = 1e-8


class IntegrationError(RuntimeError):
    pass


class StepLimitExceeded(IntegrationError):
    pass


class StepUnderflow(IntegrationError):
    pass


class NegativeUndershoot(IntegrationError):
    """A component dropped below -1e-8 (the run is rejected rather than clamped)."""


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-8
    atol: float = 1e-10
    first_step: float | None = None
    max_step: float = math.inf
    max_steps: int = 10_000_000
    sample_interval: float = 1.0
    # negative states are tolerated (not clamped) down to this level
    negative_tolerance: float = NEGATIVE_TOLERANCE

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if not self.sample_interval > 0:
            raise ValueError("sample_interval must be positive")
        if self.first_step is not None and not self.first_step > 0:
            raise ValueError("first_step must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")


@dataclass(frozen=True)
class IntegratorStats:
    accepted: int
    rejected: int
    rhs_evals: int
    max_error_estimate: float


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    stats: IntegratorStats

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self):
        return len(self.times)


def _initial_step(f, t0, y0, f0, direction_span, rtol, atol):
    # Hairer-Norsett-Wanner starting step heuristic, order 5
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, direction_span)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, direction_span)


def integrate_ode(f, y0, t_span, cfg: IntegratorConfig | None = None,
                  nonnegative: bool = False) -> Trajectory:
    """Integrate ``y' = f(t, y)`` forward over ``t_span`` and sample on a uniform grid.

    Samples are at ``t0 + k * cfg.sample_interval`` plus the end point,
    evaluated with the method's 4th-order continuous extension.  With
    ``nonnegative`` an accepted step below ``-cfg.negative_tolerance`` raises
    NegativeUndershoot.
    """
    cfg = cfg or IntegratorConfig()
    t0, t_end = map(float, t_span)
    if t_end < t0:
        raise ValueError("backward integration is not supported")
    y = np.array(y0, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("initial state must be finite")

    n_samples = int(math.floor((t_end - t0) / cfg.sample_interval + 1e-12)) + 1
    grid = t0 + cfg.sample_interval * np.arange(n_samples)
    if t_end - grid[-1] > 1e-12 * max(1.0, abs(t_end)):
        grid = np.append(grid, t_end)
    out = np.empty((grid.size, y.size))
    out[0] = y
    next_idx = 1

    span = t_end - t0
    if span == 0.0:
        return Trajectory(grid, out, IntegratorStats(0, 0, 0, 0.0))

    rtol, atol = cfg.rtol, cfg.atol
    neg_tol = cfg.negative_tolerance
    k = np.empty((7, y.size))
    k[0] = f(t0, y)
    nfev = 1
    if cfg.first_step is None:
        h = _initial_step(f, t0, y, k[0], span, rtol, atol)
        nfev += 1
    else:
        h = cfg.first_step
    h = min(h, cfg.max_step, span)
    h_min = 1e-14 * span

    t = t0
    accepted = rejected = 0
    err_prev = 1e-4
    max_err = 0.0
    rejected_last = False
    while t < t_end:
        if accepted + rejected >= cfg.max_steps:
            raise StepLimitExceeded(f"more than {cfg.max_steps} steps before t={t_end} (reached t={t})")
        if h < h_min:
            raise StepUnderflow(f"step {h:.3e} below {h_min:.3e} at t={t}")
        last = t + h >= t_end
        if last:
            h = t_end - t

        for i in range(1, 7):
            a = _A[i]
            dy = a[0] * k[0]
            for j in range(1, i):
                if a[j]:
                    dy = dy + a[j] * k[j]
            k[i] = f(t + _C[i] * h, y + h * dy)
        nfev += 6
        # stage 7 input equals the 5th-order solution
        y_new = y + h * (_B[:6] @ k[:6])
        err_vec = h * (_E @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if not math.isfinite(err):
            err = math.inf

        if err <= 1.0:
            t_new = t_end if last else t + h
            max_err = max(max_err, err)
            while next_idx < grid.size and grid[next_idx] <= t_new:
                theta = (grid[next_idx] - t) / h
                if grid[next_idx] == t_new:
                    out[next_idx] = y_new
                else:
                    powers = np.array([theta, theta ** 2, theta ** 3, theta ** 4])
                    out[next_idx] = y + h * (k.T @ (_P @ powers))
                next_idx += 1
            if nonnegative and float(np.min(y_new)) < -neg_tol:
                raise NegativeUndershoot(f"component fell to {np.min(y_new):.3e} at t={t_new}")
            t, y = t_new, y_new
            k[0] = k[6]
            accepted += 1
            if err == 0.0:
                fac = _FAC_MAX
            else:
                fac = _SAFETY * err ** -_ALPHA * err_prev ** _BETA
                fac = min(_FAC_MAX, max(_FAC_MIN, fac))
            if rejected_last:
                fac = min(fac, 1.0)
            err_prev = max(err, 1e-4)
            h = min(h * fac, cfg.max_step)
            rejected_last = False
        else:
            rejected += 1
            rejected_last = True
            fac = max(_FAC_MIN, _SAFETY * err ** -0.2) if math.isfinite(err) else _FAC_MIN
            h = h * fac

    while next_idx < grid.size:  # guard against round-off at the final sample
        out[next_idx] = y
        next_idx += 1
    if not np.all(np.isfinite(out)):
        raise IntegrationError("non-finite state encountered")
    return Trajectory(grid, out, IntegratorStats(accepted, rejected, nfev, max_err))


def integrate(p: ModelParams, x0, t_span, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Simulate the model selected by ``p`` from ``x0``."""
    x0 = check_admissible(p, x0)
    return integrate_ode(vector_field(p), x0, t_span, cfg, nonnegative=True)


@dataclass(frozen=True)
class RegionReport:
    passed: bool
    started_inside: bool
    min_component: float
    max_total_excess: float
    max_bound_violation: float
    failures: list[str] = field(default_factory=list)


def invariant_region_check(traj: Trajectory, p: ModelParams, rel_tol: float = 1e-8) -> RegionReport:
    """Check nonnegativity and the total-population bound along a trajectory.

    Inside-start trajectories must keep ``T <= Lambda/mu`` (relative slack
    ``rel_tol``); every trajectory must satisfy the comparison bound
    ``T(t) <= (T(0) - Lambda/mu) exp(-mu t) + Lambda/mu``.
    """
    cap = p.s0
    slack = rel_tol * cap
    totals = traj.states.sum(axis=1)
    t_rel = traj.times - traj.times[0]
    bound = (totals[0] - cap) * np.exp(-p.mu * t_rel) + cap
    inside = bool(totals[0] <= cap * (1 + 1e-15) and np.all(traj.states[0] >= 0))
    min_comp = float(traj.states.min())
    excess = float(np.max(totals - cap))
    bound_violation = float(np.max(totals - bound))
    failures = []
    if min_comp < -NEGATIVE_TOLERANCE:
        failures.append(f"component reached {min_comp:.3e}")
    if inside and excess > slack:
        failures.append(f"total exceeded Lambda/mu by {excess:.3e}")
    # bound slack scales with the largest total seen (integration error is relative)
    if bound_violation > rel_tol * max(cap, float(totals.max())):
        failures.append(f"comparison bound violated by {bound_violation:.3e}")
    return RegionReport(not failures, inside, min_comp, excess, bound_violation, failures)


def convergence_check(traj: Trajectory, target, tol: float) -> tuple[bool, float | None]:
    """Return ``(converged, entry_time)`` for the max-norm ``tol``-ball at ``target``.

    Converged means the final sample is inside the ball; ``entry_time`` is the
    earliest sample time from which every later sample stays inside.
    """
    dist = np.max(np.abs(traj.states - np.asarray(target, dtype=float)), axis=1)
    inside = dist <= tol
    if not inside[-1]:
        return False, None
    outside = np.flatnonzero(~inside)
    first = 0 if outside.size == 0 else int(outside[-1]) + 1
    return True, float(traj.times[first])
