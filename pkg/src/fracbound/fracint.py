"""Adaptive quadrature on the unit interval and two-sided Riemann-Liouville
fractional integrals.

All weight integrals in the bound evaluators and both fractional integrals
funnel through one engine, :func:`integrate_unit`, a QUADPACK adaptive
Gauss-Kronrod rule.  The fractional kernels (x-t)^(alpha-1) are removed
analytically by the power substitution u = (x-t)^alpha before quadrature,
so the engine only ever sees bounded integrands there:

    J_left(f; a, x) = (x-a)^alpha / gamma(alpha+1) *
                      integral_0^1 f(x - (x-a) v^(1/alpha)) dv

Divergent integrands (for example a 1/(1-t) weight) are reported as
:class:`~fracbound.errors.DivergentIntegralError`, never as large finite
numbers.
"""

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .errors import DivergentIntegralError, DomainError
from .specfun import gamma

__all__ = [
    "QuadratureConfig",
    "FracParams",
    "DEFAULT_QUADRATURE",
    "integrate_unit",
    "integrate_unit_with_error",
    "rl_left",
    "rl_right",
]

#: Tolerance for the Holder-conjugacy check 1/p + 1/q = 1.
CONJUGACY_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and subdivision limit for all numeric integration."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not (self.rel_tol > 0.0):
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class FracParams:
    """Parameters of one bound evaluation: the integral order alpha and the
    optional power-weight exponent s, Holder exponent p, and mean exponent q.
    """

    alpha: float
    s: float | None = None
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        if not (isinstance(self.alpha, (int, float)) and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")
        if self.alpha <= 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.s is not None and not (0.0 < self.s <= 1.0):
            raise DomainError(f"s must lie in (0, 1], got {self.s}")
        if self.p is not None and not (self.p > 1.0):
            raise DomainError(f"p must be > 1, got {self.p}")
        if self.q is not None and not (self.q >= 1.0):
            raise DomainError(f"q must be >= 1, got {self.q}")
        if self.p is not None and self.q is not None:
            if abs(1.0 / self.p + 1.0 / self.q - 1.0) > CONJUGACY_TOL:
                raise DomainError(
                    f"p={self.p} and q={self.q} are not Holder conjugates"
                )

    @classmethod
    def holder(cls, alpha: float, p: float, s: float | None = None) -> "FracParams":
        """Build parameters with q computed from p (q is never user-supplied
        independently, so 1/p + 1/q = 1 holds by construction)."""
        if not (isinstance(p, (int, float)) and p > 1.0):
            raise DomainError(f"p must be > 1, got {p!r}")
        return cls(alpha=alpha, s=s, p=float(p), q=p / (p - 1.0))


def _guarded(g: Callable[[float], float]) -> Callable[[float], float]:
    """Wrap an integrand so arithmetic blow-ups at a node poison the estimate
    with NaN instead of aborting the quadrature; the NaN is then reported as
    divergence by the caller."""

    def wrapped(t: float) -> float:
        try:
            return float(g(t))
        except (ZeroDivisionError, OverflowError, ValueError):
            return math.nan

    return wrapped


def integrate_unit_with_error(
    g: Callable[[float], float], cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """Integrate g over (0, 1); return (value, error estimate).

    Endpoint singularities that are integrable are handled by the adaptive
    rule (nodes stay interior).  Raises DivergentIntegralError when the
    estimate is non-finite or the error fails to shrink below
    max(abs_tol, rel_tol * |value|) within the subdivision budget.
    """
    out = quad(
        _guarded(g),
        0.0,
        1.0,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        full_output=1,
    )
    value, err = out[0], out[1]
    if not math.isfinite(value):
        raise DivergentIntegralError(
            "integrand is non-finite toward a point of (0, 1); integral diverges"
        )
    if len(out) > 3 and err > max(cfg.abs_tol, cfg.rel_tol * abs(value)):
        raise DivergentIntegralError(
            f"integral did not converge within {cfg.max_subdivisions} "
            f"subdivisions (estimate {value:.6g}, error {err:.3g})"
        )
    return value, err


def integrate_unit(
    g: Callable[[float], float], cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Adaptive Gauss-Kronrod estimate of the integral of g over (0, 1)."""
    return integrate_unit_with_error(g, cfg)[0]


def _evaluator(f) -> Callable[[float], float]:
    # TestFunction instances are callable; bare callables pass through.
    return f


def rl_left(f, a: float, x: float, alpha: float,
            cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Left Riemann-Liouville integral of order alpha of f, anchored at a and
    evaluated at x >= a:  gamma(alpha)^-1 * integral_a^x (x-t)^(alpha-1) f(t) dt.

    alpha = 0 returns f(x) (the identity-operator convention); the degenerate
    range x = a returns exactly 0 without quadrature.
    """
    if not math.isfinite(alpha) or alpha < 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if x < a:
        raise DomainError(f"x={x} must not lie left of the anchor a={a}")
    fn = _evaluator(f)
    if alpha == 0.0:
        return float(fn(x))
    if x == a:
        return 0.0
    width = x - a
    inv = 1.0 / alpha
    unit = integrate_unit(lambda v: fn(x - width * v**inv), cfg)
    return width**alpha / gamma(alpha + 1.0) * unit


def rl_right(f, x: float, b: float, alpha: float,
             cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Right Riemann-Liouville integral of order alpha of f, anchored at b and
    evaluated at x <= b:  gamma(alpha)^-1 * integral_x^b (t-x)^(alpha-1) f(t) dt.

    Computed as the mirror of :func:`rl_left` under t -> x + b - t.
    """
    if not math.isfinite(alpha) or alpha < 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if x > b:
        raise DomainError(f"x={x} must not lie right of the anchor b={b}")
    fn = _evaluator(f)
    if alpha == 0.0:
        return float(fn(x))
    if x == b:
        return 0.0
    return rl_left(lambda u: fn(x + b - u), x, b, alpha, cfg)
