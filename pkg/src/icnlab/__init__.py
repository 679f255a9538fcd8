"""icnlab: iterated Crank-Nicolson schemes on periodic 1-D grids.

Weighted two-iteration predictor-corrector steppers (including the
geometric and alternating weight variants that stay second order away
from theta = 1/2), von Neumann stability maps, and a convergence-table
harness with a CLI front end.
"""
from .analysis import (
    ConvergenceRow,
    NormTriple,
    SchemeTable,
    SweepResult,
    SweepSpec,
    advection_sweep,
    burgers_reference,
    burgers_sweep,
    error_norms,
    observed_order,
    run_sweep,
    steps_for,
)
from .core import (
    DivergenceError,
    Field,
    Grid1D,
    delta1,
    delta2,
    delta3,
    second_derivative,
    wrap_index,
)
from .problems import (
    Problem,
    ProblemKind,
    burgers,
    initial_condition,
    linear_advection,
    semilinear_advection,
)
from .schemes import (
    SchemeConfig,
    SchemeVariant,
    aa_linear_stencil,
    ga_linear_stencil,
    integrate,
    step_aa,
    step_ga,
    step_icn,
    step_theta_icn,
)
from .stability import (
    STABILITY_TOLERANCE,
    AmplificationResult,
    StabilityMap,
    g_aa_composed,
    g_ga,
    g_theta_step,
    scan_region,
)

__version__ = "0.1.0"

__all__ = [
    "AmplificationResult",
    "ConvergenceRow",
    "DivergenceError",
    "Field",
    "Grid1D",
    "NormTriple",
    "Problem",
    "ProblemKind",
    "STABILITY_TOLERANCE",
    "SchemeConfig",
    "SchemeTable",
    "SchemeVariant",
    "StabilityMap",
    "SweepResult",
    "SweepSpec",
    "aa_linear_stencil",
    "advection_sweep",
    "burgers",
    "burgers_reference",
    "burgers_sweep",
    "delta1",
    "delta2",
    "delta3",
    "error_norms",
    "g_aa_composed",
    "g_ga",
    "g_theta_step",
    "ga_linear_stencil",
    "initial_condition",
    "integrate",
    "linear_advection",
    "observed_order",
    "run_sweep",
    "scan_region",
    "second_derivative",
    "semilinear_advection",
    "step_aa",
    "step_ga",
    "step_icn",
    "step_theta_icn",
    "steps_for",
    "wrap_index",
]
