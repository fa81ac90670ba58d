"""Equilibria, thresholds and stability checks for competing-ideology compartmental models."""

from .analysis import (
    EquilibriumKind,
    EquilibriumReport,
    NoConvergence,
    Regime,
    RegimeReport,
    Stability,
    ThresholdStatus,
    all_equilibria,
    boundary_equilibria_two,
    classify_regime,
    coexistence_equilibria,
    coexistence_equilibrium,
    delta_thresholds,
    equilibria_bare,
    invasion_numbers_delta,
    local_stability,
    ngm_build,
    r0_bare,
    reproduction_numbers_two,
)
from .integrate import (
    IntegratorConfig,
    Trajectory,
    convergence_check,
    integrate,
    invariant_region_check,
)
from .lyapunov import LyapunovKind, decrease_check, g, lyapunov_spec, lyapunov_value, solve_weights
from .model import (
    IdeologyParams,
    ModelParams,
    ValidationError,
    derived_quantities,
    jacobian_bare,
    jacobian_two,
    rhs_bare,
    rhs_two,
)

__version__ = "0.1.0"
