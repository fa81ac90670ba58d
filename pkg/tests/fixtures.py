"""Parameter fixtures and random generators shared by the test modules."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from exclusion_lab.cli import load_scenario
from exclusion_lab.model import IdeologyParams, ModelParams

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

P1 = IdeologyParams(beta=0.2, d_e=0.2, d_r=0.3, c_e=0.1, c_r=0.05, q_e=0.6)
BARE_P1 = ModelParams(1.0, 0.1, P1)


def scenario_path(name: str) -> str:
    return str(SCENARIOS / f"{name}.json")


def scenario_params(name: str, **changes) -> ModelParams:
    p = load_scenario(scenario_path(name)).params
    return p.with_changes(**changes) if changes else p


def swapped(p: ModelParams) -> ModelParams:
    """Same model with the ideology labels exchanged (delta dropped)."""
    return ModelParams(p.lam, p.mu, p.ideology2, p.ideology1, 0.0)


def random_ideology(rng: np.random.Generator) -> IdeologyParams:
    return IdeologyParams(
        beta=float(np.exp(rng.uniform(np.log(0.01), np.log(2.0)))),
        d_e=float(rng.uniform(0.01, 1.0)),
        d_r=float(rng.uniform(0.01, 1.0)),
        c_e=float(rng.uniform(0.01, 1.0)),
        c_r=float(rng.uniform(0.01, 1.0)),
        q_e=float(rng.uniform(0.0, 1.0)),
    )


def random_bare(rng: np.random.Generator) -> ModelParams:
    return ModelParams(float(rng.uniform(0.1, 10.0)), float(rng.uniform(0.02, 1.0)), random_ideology(rng))


def random_two(rng: np.random.Generator, delta: float = 0.0) -> ModelParams:
    return ModelParams(float(rng.uniform(0.1, 10.0)), float(rng.uniform(0.02, 1.0)),
                       random_ideology(rng), random_ideology(rng), delta)


def random_supercritical_pair(rng: np.random.Generator) -> ModelParams:
    """Both R_i > 1 and R_1 != R_2, on the unit-inflow scale of the fixtures."""
    from exclusion_lab.analysis import reproduction_numbers_two

    while True:
        p = ModelParams(1.0, 0.1, random_ideology(rng), random_ideology(rng), 0.0)
        r1, r2 = reproduction_numbers_two(p)
        if min(r1, r2) > 1.05 and abs(r1 - r2) > 1e-3 * max(r1, r2):
            return p


rates = st.floats(min_value=0.01, max_value=2.0, allow_nan=False)
fractions = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)

ideologies = st.builds(IdeologyParams, beta=rates, d_e=rates, d_r=rates, c_e=rates, c_r=rates, q_e=fractions)
bare_params = st.builds(ModelParams, lam=st.floats(0.1, 10.0), mu=st.floats(0.02, 1.0), ideology1=ideologies)
two_params = st.builds(ModelParams, lam=st.floats(0.1, 10.0), mu=st.floats(0.02, 1.0), ideology1=ideologies,
                       ideology2=ideologies, delta=st.floats(0.0, 5.0))
