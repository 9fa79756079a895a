"""fracbound: numerical verification of Ostrowski-type bounds for
Riemann-Liouville fractional integrals of functions with h-convex derivative
magnitude.

The package computes both sides of every bound in the family, certifies the
function-class hypotheses on grids, and checks closed-form reductions and
special cases at machine precision.
"""

from .errors import (
    ConfigError,
    DivergentBoundError,
    DivergentIntegralError,
    DomainError,
    FracboundError,
    HypothesisError,
)
from .fracint import DEFAULT_QUADRATURE, FracParams, QuadratureConfig, integrate_unit, rl_left, rl_right
from .funcs import HFunction, PropertyReport, TestFunction, builtin_f, builtin_h, parse_f_spec, parse_h_spec
from .bounds import (
    BoundReport,
    bound_classical,
    bound_hconvex,
    bound_holder,
    bound_power_mean,
    identity_residual,
    make_report,
    ostrowski_lhs,
    power_closed_bound,
    theorem_bound,
)
from .verify import (
    ClassicalComparison,
    IdentityResult,
    ParamsGrid,
    SweepResult,
    TightnessResult,
    compare_classical,
    identity_sweep,
    sweep,
    tightness_search,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "FracboundError", "DomainError", "ConfigError",
    "DivergentIntegralError", "DivergentBoundError", "HypothesisError",
    "QuadratureConfig", "FracParams", "DEFAULT_QUADRATURE",
    "integrate_unit", "rl_left", "rl_right",
    "HFunction", "TestFunction", "PropertyReport",
    "builtin_h", "builtin_f", "parse_h_spec", "parse_f_spec",
    "BoundReport", "ostrowski_lhs", "identity_residual",
    "bound_classical", "bound_hconvex", "bound_holder", "bound_power_mean",
    "theorem_bound", "power_closed_bound", "make_report",
    "ParamsGrid", "SweepResult", "TightnessResult", "ClassicalComparison",
    "IdentityResult", "sweep", "tightness_search", "compare_classical",
    "identity_sweep",
]
