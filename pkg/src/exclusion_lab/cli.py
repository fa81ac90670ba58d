"""exclusion-lab: analyze, simulate, sweep, bifurcate and verify scenarios.

Exit codes: 0 ok, 1 verification failure, 2 validation error,
3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis
from .analysis import EquilibriumKind, NoConvergence, Stability
from .integrate import IntegrationError, IntegratorConfig, integrate
from .model import IdeologyParams, ModelParams, ValidationError, check_admissible
from .verification import DEFAULT_T_END, verify

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

MODEL_KINDS = ("bare_bones", "two_ideology")
TOP_KEYS = {"model", "lambda", "mu", "ideology1", "ideology2", "delta", "initial", "integrator", "seed"}
IDEOLOGY_KEYS = ("beta", "d_e", "d_r", "c_e", "c_r", "q_e")
INTEGRATOR_KEYS = ("rtol", "atol")
DEFAULT_SEED_FRACTION = 1e-3


class IOFailure(Exception):
    pass


# ---------------------------------------------------------------- scenario

@dataclass(frozen=True)
class Scenario:
    model: str
    params: ModelParams
    initial: np.ndarray | None
    integrator: IntegratorConfig
    seed: int
    raw: dict = field(repr=False, compare=False, default_factory=dict)

    def initial_state(self) -> np.ndarray:
        """The given start, or ``S = Lambda/mu`` with every adopter class at 1e-3 of that."""
        if self.initial is not None:
            return self.initial.copy()
        s0 = self.params.s0
        x = np.full(self.params.dim, DEFAULT_SEED_FRACTION * s0)
        x[0] = s0
        return x


def _number(value, path, errors):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors[path] = f"must be a number, got {value!r}"
        return None
    return float(value)


def _ideology(raw, path, errors) -> IdeologyParams | None:
    if not isinstance(raw, dict):
        errors[path] = "must be an object"
        return None
    for key in raw:
        if key not in IDEOLOGY_KEYS:
            hint = " (q_r is derived as 1 - q_e)" if key == "q_r" else ""
            errors[f"{path}.{key}"] = "unknown key" + hint
    values = {}
    for key in IDEOLOGY_KEYS:
        if key not in raw:
            errors[f"{path}.{key}"] = "missing"
        else:
            values[key] = _number(raw[key], f"{path}.{key}", errors)
    if len(values) < len(IDEOLOGY_KEYS) or any(v is None for v in values.values()):
        return None
    try:
        return IdeologyParams(**values)
    except ValidationError as exc:
        errors.update({f"{path}.{k}": v for k, v in exc.errors.items()})
        return None


def _required(raw, key, errors, parse):
    if key not in raw:
        errors[key] = "missing"
        return None
    return parse(raw[key], key, errors)


def parse_scenario(raw) -> Scenario:
    """Validate a scenario mapping; every problem is collected before raising."""
    errors: dict[str, str] = {}
    if not isinstance(raw, dict):
        raise ValidationError({"scenario": "top level must be a JSON object"})
    for key in raw:
        if key not in TOP_KEYS:
            errors[key] = "unknown key"

    model = raw.get("model")
    if model not in MODEL_KINDS:
        errors["model"] = f"must be one of {MODEL_KINDS}, got {model!r}"
    lam = _required(raw, "lambda", errors, _number)
    mu = _required(raw, "mu", errors, _number)
    ip1 = _required(raw, "ideology1", errors, _ideology)

    ip2 = None
    delta = 0.0
    if model == "bare_bones":
        for key in ("ideology2", "delta"):
            if key in raw:
                errors[key] = "not allowed for the bare_bones model"
    elif model == "two_ideology":
        if "ideology2" in raw:
            ip2 = _ideology(raw["ideology2"], "ideology2", errors)
        else:
            errors["ideology2"] = "missing (required for two_ideology)"
        if "delta" in raw:
            delta = _number(raw["delta"], "delta", errors)

    cfg_kwargs = {}
    if "integrator" in raw:
        block = raw["integrator"]
        if not isinstance(block, dict):
            errors["integrator"] = "must be an object"
        else:
            for key, value in block.items():
                if key not in INTEGRATOR_KEYS:
                    errors[f"integrator.{key}"] = "unknown key"
                    continue
                v = _number(value, f"integrator.{key}", errors)
                if v is not None and not (v > 0 and math.isfinite(v)):
                    errors[f"integrator.{key}"] = f"must be > 0, got {value!r}"
                elif v is not None:
                    cfg_kwargs[key] = v

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        errors["seed"] = f"must be an unsigned 64-bit integer, got {seed!r}"

    params = None
    if not errors:
        try:
            params = ModelParams(lam, mu, ip1, ip2, delta)
        except ValidationError as exc:
            errors.update(exc.errors)

    initial = None
    if "initial" in raw and params is not None:
        vals = raw["initial"]
        if not isinstance(vals, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in vals):
            errors["initial"] = "must be a list of numbers"
        else:
            try:
                initial = check_admissible(params, vals, "initial")
            except ValidationError as exc:
                errors.update(exc.errors)

    if errors:
        raise ValidationError(errors)
    return Scenario(model, params, initial, IntegratorConfig(**cfg_kwargs), seed, copy.deepcopy(raw))


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IOFailure(f"cannot read scenario {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError({"scenario": f"invalid JSON: {exc}"}) from exc
    return parse_scenario(raw)


# ---------------------------------------------------------------- sweep spec

SWEEP_QUANTITIES = (
    "r0", "r1", "r2", "i1_delta", "i2_delta", "delta_star", "delta_star_star", "sigma",
    "regime", "x0_stability", "x_star_exists", "x_star_stability",
    "x_star_star_exists", "x_star_star_stability", "coexistence_count", "coexistence_stability",
)


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    steps: int
    record: tuple[str, ...]

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def _param_paths(scenario: Scenario) -> list[str]:
    paths = ["lambda", "mu"] + [f"ideology1.{k}" for k in IDEOLOGY_KEYS]
    if scenario.model == "two_ideology":
        paths += ["delta"] + [f"ideology2.{k}" for k in IDEOLOGY_KEYS]
    return paths


def make_sweep_spec(scenario: Scenario, param, start, stop, steps, record) -> SweepSpec:
    errors = {}
    if param is None:
        errors["param"] = "required"
    elif param not in _param_paths(scenario):
        errors["param"] = f"does not resolve; choose from {_param_paths(scenario)}"
    if start is None or stop is None:
        errors["from/to"] = "both required"
    elif not (math.isfinite(start) and math.isfinite(stop)) or not start < stop:
        errors["from/to"] = f"need finite from < to, got {start} and {stop}"
    if steps is None or steps < 2:
        errors["steps"] = f"must be >= 2, got {steps}"
    names = tuple(q.strip() for q in (record or "").split(",") if q.strip())
    if not names:
        errors["record"] = "quantity list is empty"
    for q in names:
        if q not in SWEEP_QUANTITIES:
            errors[f"record.{q}"] = f"unknown quantity; choose from {SWEEP_QUANTITIES}"
    if errors:
        raise ValidationError(errors)
    return SweepSpec(param, float(start), float(stop), int(steps), names)


def params_at(scenario: Scenario, path: str, value: float) -> ModelParams:
    """Scenario parameters with one dotted field replaced (validated anew)."""
    raw = copy.deepcopy(scenario.raw)
    raw.pop("initial", None)
    node = raw
    *parents, leaf = path.split(".")
    for key in parents:
        node = node[key]
    node[leaf] = float(value)
    return parse_scenario(raw).params


# ---------------------------------------------------------------- formatting

def fmt_float(x) -> str:
    return format(float(x), ".17g")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- analyze

def analyze_report(p: ModelParams) -> dict:
    regime = analysis.classify_regime(p)
    equilibria = analysis.all_equilibria(p)
    return {
        "model": "bare_bones" if p.is_bare else "two_ideology",
        "regime": regime.to_dict(),
        "equilibria": [e.to_dict(p.labels) for e in equilibria],
    }


def _g(x) -> str:
    return "-" if x is None else f"{x:.10g}"


def analyze_text(report: dict) -> str:
    reg = report["regime"]
    lines = [f"model: {report['model']}"]
    if report["model"] == "bare_bones":
        lines.append(f"R0 = {_g(reg['r0'])}")
    else:
        lines.append(f"R1 = {_g(reg['r1'])}  R2 = {_g(reg['r2'])}  delta = {_g(reg['delta'])}")
        lines.append(f"I1^delta = {_g(reg['i1_delta'])}  I2^delta = {_g(reg['i2_delta'])}")
        for name in ("delta_star", "delta_star_star"):
            t = reg[name]
            lines.append(f"{name} = {_g(t['value'])} ({t['status']})" if t else f"{name} = -")
        lines.append(f"sigma = {_g(reg['sigma'])}")
        lines.append(f"regime: {reg['regime_label']}" + ("  [degenerate]" if reg["degenerate"] else ""))
    for note in reg["notes"]:
        lines.append(f"note: {note}")
    lines.append("")
    lines.append(f"{'kind':<14} {'stability':<10} {'residual':<10} state")
    for e in report["equilibria"]:
        state = ", ".join(f"{k}={v:.10g}" for k, v in e["state"].items())
        lines.append(f"{e['kind']:<14} {e['stability']:<10} {e['residual']:<10.2e} {state}")
    return "\n".join(lines) + "\n"


def run_analyze(scenario: Scenario, fmt: str = "text", output: str | None = None) -> int:
    report = analyze_report(scenario.params)
    write_text(output, to_json(report) if fmt == "json" else analyze_text(report))
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def run_simulate(scenario: Scenario, t_end: float, output: str | None = None,
                 summary_stream=None) -> int:
    if not (math.isfinite(t_end) and t_end >= 0):
        raise ValidationError({"t-end": f"must be finite and >= 0, got {t_end}"})
    p = scenario.params
    x0 = scenario.initial_state()
    traj = integrate(p, x0, (0.0, t_end), scenario.integrator)
    rows = [[t, *x] for t, x in zip(traj.times, traj.states)]
    write_text(output, csv_text(("t",) + p.labels, rows))

    try:
        candidates = analysis.all_equilibria(p)
    except NoConvergence:
        candidates = analysis.all_equilibria(p, with_coexistence=False)
    eq, dist = analysis.nearest_equilibrium(p, traj.final, candidates)
    final = " ".join(f"{k}={fmt_float(v)}" for k, v in zip(p.labels, traj.final))
    stream = summary_stream or (sys.stderr if output is None else sys.stdout)
    stream.write(f"final t={fmt_float(traj.times[-1])} {final}; nearest equilibrium "
                 f"{eq.kind.value} ({eq.stability.value}) at max-norm distance {dist:.3e}\n")
    return EXIT_OK


# ---------------------------------------------------------------- sweep

def _stability(reports, kind):
    for e in reports:
        if e.kind is kind:
            return e.stability.value
    return None


def point_quantities(p: ModelParams) -> dict:
    """Every sweepable quantity at one parameter point (None when undefined)."""
    reg = analysis.classify_regime(p)
    eqs = analysis.all_equilibria(p)
    star_kind = EquilibriumKind.BARE_ENDEMIC if p.is_bare else EquilibriumKind.DOMINANCE1
    coex = [e for e in eqs if e.kind is EquilibriumKind.COEXISTENCE]

    def thr(t):
        if t is None or t.status.value in ("Undefined", "NoCrossing"):
            return None
        return t.value

    return {
        "r0": reg.r0,
        "r1": reg.r1,
        "r2": reg.r2,
        "i1_delta": reg.i1_delta,
        "i2_delta": reg.i2_delta,
        "delta_star": thr(reg.delta_star),
        "delta_star_star": thr(reg.delta_star_star),
        "sigma": reg.sigma,
        "regime": reg.regime_label.value if reg.regime_label else None,
        "x0_stability": _stability(eqs, EquilibriumKind.IDEOLOGY_FREE),
        "x_star_exists": any(e.kind is star_kind for e in eqs),
        "x_star_stability": _stability(eqs, star_kind),
        "x_star_star_exists": None if p.is_bare else any(e.kind is EquilibriumKind.DOMINANCE2 for e in eqs),
        "x_star_star_stability": _stability(eqs, EquilibriumKind.DOMINANCE2),
        "coexistence_count": None if p.is_bare else len(coex),
        "coexistence_stability": coex[0].stability.value if coex else None,
    }


def _evaluate(scenario, path, value, fn, warnings):
    try:
        return fn(params_at(scenario, path, value))
    except ValidationError as exc:
        warnings.append(f"{path}={fmt_float(value)}: invalid parameters ({'; '.join(f'{k}: {v}' for k, v in exc.errors.items())})")
    except (ArithmeticError, IntegrationError) as exc:
        warnings.append(f"{path}={fmt_float(value)}: numerical failure ({type(exc).__name__}: {exc})")
    return None


def _warn_summary(warnings, n_points, stream) -> None:
    if warnings:
        stream.write(f"warnings: {len(warnings)} of {n_points} points failed\n")
        for w in warnings:
            stream.write(f"  {w}\n")


def run_sweep(scenario: Scenario, spec: SweepSpec, output: str | None = None, stream=None) -> int:
    stream = stream or (sys.stderr if output is None else sys.stdout)
    warnings: list[str] = []
    rows = []
    for value in spec.grid():
        q = _evaluate(scenario, spec.param, value, point_quantities, warnings)
        rows.append([value] + [None if q is None else q[name] for name in spec.record])
    write_text(output, csv_text((spec.param,) + spec.record, rows))
    _warn_summary(warnings, spec.steps, stream)
    ok = spec.steps - len(warnings)
    stream.write(f"sweep: {ok}/{spec.steps} points evaluated\n")
    return EXIT_OK if ok >= 1 else EXIT_NUMERICAL


# ---------------------------------------------------------------- bifurcate

BIFURCATION_HEADER = ("delta", "x_star_stability", "x_star_star_stability", "coexistence_count",
                      "S", "E1", "R1", "E2", "R2", "coexistence_stability")


def bifurcation_point(p: ModelParams) -> dict:
    eqs = analysis.all_equilibria(p)
    coex = [e for e in eqs if e.kind is EquilibriumKind.COEXISTENCE]
    return {
        "x_star": _stability(eqs, EquilibriumKind.DOMINANCE1),
        "x_star_star": _stability(eqs, EquilibriumKind.DOMINANCE2),
        "coexistence": coex,
    }


def bifurcation_summary(scenario: Scenario, grid, points) -> dict:
    """Observed changes of the equilibrium picture along the delta grid."""
    step = float(grid[1] - grid[0])
    crossings, changes = [], []
    prev = None
    for d, pt in zip(grid, points):
        if pt is None:
            continue
        present = bool(pt["coexistence"])
        signature = (pt["x_star"], pt["x_star_star"],
                     pt["coexistence"][0].stability.value if present else None)
        if prev is not None:
            d0, present0, sig0 = prev
            mid = 0.5 * (d0 + d)
            if present != present0:
                crossings.append({"delta": mid, "coexistence": "appears" if present else "disappears"})
            if signature != sig0:
                changes.append({"delta": mid, "from": list(sig0), "to": list(signature)})
        prev = (d, present, signature)

    th = analysis.delta_thresholds(scenario.params.with_changes(delta=0.0))
    thresholds = {}
    for name, t in (("delta_star", th.delta_star), ("delta_star_star", th.delta_star_star)):
        if not t.positive:
            continue
        in_range = grid[0] <= t.value <= grid[-1]
        near = [c["delta"] for c in crossings if abs(c["delta"] - t.value) <= step]
        thresholds[name] = {"value": t.value, "in_range": bool(in_range),
                            "matched_crossing": near[0] if near else None,
                            "agrees": (bool(near) if in_range else None)}
    unmatched = [c["delta"] for c in crossings
                 if not any(abs(c["delta"] - v["value"]) <= step for v in thresholds.values())]
    return {
        "grid_step": step,
        "coexistence_crossings": crossings,
        "qualitative_changes": changes,
        "thresholds": thresholds,
        "unmatched_crossings": unmatched,
        "no_qualitative_change": not changes,
    }


def run_bifurcate(scenario: Scenario, start: float, stop: float, steps: int,
                  output: str | None = None, fmt: str = "text", stream=None) -> int:
    if scenario.model != "two_ideology":
        raise ValidationError({"model": "bifurcate needs a two_ideology scenario"})
    spec = make_sweep_spec(scenario, "delta", start, stop, steps, "regime")
    if spec.start < 0:
        raise ValidationError({"from": f"delta must be >= 0, got {spec.start}"})
    stream = stream or (sys.stderr if output is None else sys.stdout)
    warnings: list[str] = []
    grid = spec.grid()
    points = [_evaluate(scenario, "delta", d, bifurcation_point, warnings) for d in grid]
    rows = []
    for d, pt in zip(grid, points):
        if pt is None:
            rows.append([d] + [None] * (len(BIFURCATION_HEADER) - 1))
            continue
        coex = pt["coexistence"]
        state = list(coex[0].state) if coex else [None] * 5
        rows.append([d, pt["x_star"], pt["x_star_star"], len(coex), *state,
                     coex[0].stability.value if coex else None])
    write_text(output, csv_text(BIFURCATION_HEADER, rows))
    _warn_summary(warnings, steps, stream)
    summary = bifurcation_summary(scenario, grid, points)
    if fmt == "json":
        stream.write(to_json(summary))
    else:
        stream.write(bifurcation_text(summary))
    return EXIT_OK if len(warnings) < steps else EXIT_NUMERICAL


def bifurcation_text(s: dict) -> str:
    lines = [f"grid step: {s['grid_step']:.6g}"]
    if s["no_qualitative_change"]:
        lines.append("no qualitative change across the range")
    for c in s["coexistence_crossings"]:
        lines.append(f"coexistence {c['coexistence']} near delta = {c['delta']:.6g}")
    for name, t in s["thresholds"].items():
        if not t["in_range"]:
            lines.append(f"{name} = {t['value']:.6g} (outside range)")
        elif t["agrees"]:
            lines.append(f"{name} = {t['value']:.6g} matches observed crossing at {t['matched_crossing']:.6g}")
        else:
            lines.append(f"{name} = {t['value']:.6g} has no observed crossing within one grid step")
    for d in s["unmatched_crossings"]:
        lines.append(f"crossing at {d:.6g} matches no threshold")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- verify

def run_verify(scenario: Scenario, trials: int, seed: int | None = None, t_end: float = DEFAULT_T_END,
               output: str | None = None, fmt: str = "text", stream=None) -> int:
    if trials is None or trials < 1:
        raise ValidationError({"trials": f"must be >= 1, got {trials}"})
    if seed is None:
        seed = scenario.seed
    if not 0 <= seed < 2**64:
        raise ValidationError({"seed": f"must be an unsigned 64-bit integer, got {seed}"})
    if not (math.isfinite(t_end) and t_end > 0):
        raise ValidationError({"t-end": f"must be finite and > 0, got {t_end}"})
    report = verify(scenario.params, trials, seed=seed, t_end=t_end,
                    cfg=scenario.integrator, initial=scenario.initial)
    body = dict(report.to_dict(), seed=seed, t_end=t_end)
    if output is not None:
        write_text(output, to_json(body))
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(to_json(body))
    else:
        c = body["counts"]
        stream.write(f"theorem: {body['theorem'] or 'none'} (target {body['target'] or '-'})\n")
        stream.write(f"trials {c['trials']}: region ok {c['region_ok']}, converged {c['converged']}, "
                     f"lyapunov ok {c['lyapunov_ok']}, errors {c['errors']}\n")
        if body["hypotheses"]:
            stream.write("hypotheses: " + ", ".join(f"{k}={v}" for k, v in body["hypotheses"].items()) + "\n")
        for note in body["notes"]:
            stream.write(f"note: {note}\n")
        stream.write("PASS\n" if report.passed else f"FAIL ({len(body['failures'])} failing trials)\n")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exclusion-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        sp.add_argument("--output", help="output file (default: stdout)")
        return sp

    sp = add("analyze", "equilibria, reproduction and invasion numbers, thresholds, regime")
    sp.add_argument("--format", choices=("json", "text"), default="text")

    sp = add("simulate", "integrate one trajectory and write it as CSV")
    sp.add_argument("--t-end", type=float, default=DEFAULT_T_END)

    sp = add("sweep", "record quantities over a parameter grid")
    sp.add_argument("--param", required=True, help="dotted path, e.g. ideology2.beta or delta")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--record", required=True, help="comma-separated: " + ",".join(SWEEP_QUANTITIES))

    sp = add("bifurcate", "track equilibria and their stability over a delta grid")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--format", choices=("json", "text"), default="text")

    sp = add("verify", "randomized checks of the global-stability theorems")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=None, help="default: the scenario seed")
    sp.add_argument("--t-end", type=float, default=DEFAULT_T_END)
    sp.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def dispatch(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.command == "analyze":
        return run_analyze(scenario, args.format, args.output)
    if args.command == "simulate":
        return run_simulate(scenario, args.t_end, args.output)
    if args.command == "sweep":
        spec = make_sweep_spec(scenario, args.param, args.start, args.stop, args.steps, args.record)
        return run_sweep(scenario, spec, args.output)
    if args.command == "bifurcate":
        return run_bifurcate(scenario, args.start, args.stop, args.steps, args.output, args.format)
    return run_verify(scenario, args.trials, args.seed, args.t_end, args.output, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        return dispatch(args)
    except ValidationError as exc:
        sys.stderr.write("validation error:\n")
        for key, msg in exc.errors.items():
            sys.stderr.write(f"  {key}: {msg}\n")
        return EXIT_VALIDATION
    except IOFailure as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    except (ArithmeticError, IntegrationError) as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
