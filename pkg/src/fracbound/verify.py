"""Orchestrated verification: parameter sweeps asserting the bounds hold,
golden-section tightness search over the evaluation point, the classical
comparison thresholds, and the residual sweep of the generating identity.

Aggregation is deterministic: reports are sorted by (x, alpha, p, q), ties in
grid scans resolve to the smallest index, and re-running any sweep with the
same inputs is bit-identical.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    SLACK_TOL,
    BoundReport,
    make_report,
    ostrowski_lhs,
    identity_residual,
    required_h_flags,
)
from .errors import DivergentBoundError, DomainError
from .fracint import DEFAULT_QUADRATURE, FracParams, QuadratureConfig, integrate_unit_with_error
from .funcs import (
    DEFAULT_GRID_N,
    HFunction,
    TestFunction,
    certify_derivative_class,
    certify_f,
    certify_h,
    derivative_class_key,
)

__all__ = [
    "ParamsGrid",
    "SweepResult",
    "TightnessResult",
    "ClassicalComparison",
    "IdentityResult",
    "sweep",
    "tightness_search",
    "compare_classical",
    "identity_sweep",
    "clear_lhs_cache",
]

DEFAULT_ALPHAS = (0.5, 1.0, 1.5, 2.0)

#: Relative width of the golden-section bracket at termination.
REFINE_TOL = 1e-6

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ParamsGrid:
    """Grid layout of one sweep: the x count, the alpha list, and the
    exponent lists for families 2 (ps) and 3 (qs)."""

    alphas: tuple = DEFAULT_ALPHAS
    x_count: int = DEFAULT_GRID_N
    ps: tuple = ()
    qs: tuple = ()

    def __post_init__(self):
        if self.x_count < 2:
            raise DomainError(f"x_count must be >= 2, got {self.x_count}")
        if not self.alphas:
            raise DomainError("alphas must be non-empty")


@dataclass
class SweepResult:
    """Aggregated outcome of one (f, h, theorem, variant) sweep."""

    function_name: str
    h_name: str
    theorem: int
    variant: str
    grid: ParamsGrid
    reports: list = field(default_factory=list)
    min_slack: float | None = None
    argmin_x: float | None = None
    violations: int = 0
    status: str = "pass"
    error: str | None = None
    hypothesis_flags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TightnessResult:
    x_star: float
    min_slack: float
    coarse_min_slack: float
    evaluations: int


@dataclass(frozen=True)
class ClassicalComparison:
    """The two threshold records of the classical comparison: the alpha = 1
    family-1 factor against 1/2 and the family-2 factor against (1+p)^(1/p)/2.

    A strict comparison is asserted only when it holds by more than the
    quadrature error estimate, so equality cases (the identity weight lands
    exactly on 1/2) robustly report False.
    """

    h_label: str
    thm1_factor: float
    thm1_better: bool
    p: float | None = None
    thm2_lhs_factor: float | None = None
    thm2_threshold: float | None = None
    thm2_better: bool | None = None


@dataclass
class IdentityResult:
    """Residual sweep of the generating identity for one test function."""

    function_name: str
    alphas: tuple
    rows: list = field(default_factory=list)  # (alpha, x, residual)
    max_residual: float = 0.0


# ---------------------------------------------------------------------------
# left-hand-side cache: the LHS depends only on (f, alpha, x), so it is shared
# across theorems, variants, and exponent grids
# ---------------------------------------------------------------------------

_LHS_CACHE: dict = {}
_LHS_PINS: list = []


def clear_lhs_cache():
    _LHS_CACHE.clear()
    _LHS_PINS.clear()


def _cached_lhs(f: TestFunction, alpha: float, x: float, cfg: QuadratureConfig) -> float:
    key = (id(f), alpha, x, cfg)
    if key not in _LHS_CACHE:
        _LHS_PINS.append(f)
        _LHS_CACHE[key] = ostrowski_lhs(f, x, alpha, cfg)
    return _LHS_CACHE[key]


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _param_combos(theorem: int, grid: ParamsGrid, s: float | None) -> list:
    if theorem == 1:
        return [FracParams(alpha=alpha, s=s) for alpha in grid.alphas]
    if theorem == 2:
        ps = grid.ps or (2.0,)
        return [FracParams.holder(alpha=alpha, p=p, s=s)
                for alpha in grid.alphas for p in ps]
    if theorem == 3:
        qs = grid.qs or (2.0,)
        return [FracParams(alpha=alpha, q=q, s=s)
                for alpha in grid.alphas for q in qs]
    raise DomainError(f"unknown bound family {theorem!r}; expected 1, 2 or 3")


def _uncertified_reason(f: TestFunction, h: HFunction, theorem: int,
                        variants: tuple, combos: list, grid_n: int) -> str | None:
    """Certify everything the sweep needs; name the first missing hypothesis."""
    if not h.certified:
        certify_h(h, grid_n)
    if not f.certified:
        certify_f(f, grid_n)
    for variant in variants:
        for prop in required_h_flags(theorem, variant):
            if h.certified.get(prop) is not True:
                return f"h={h.label} lacks certified property {prop!r} for variant {variant!r}"
    for prop in ("derivative_consistent", "derivative_bounded"):
        if f.certified.get(prop) is not True:
            return f"f={f.label} lacks certified property {prop!r}"
    q_effs = sorted({1.0 if theorem == 1 else
                     (p.p / (p.p - 1.0) if theorem == 2 else p.q) for p in combos})
    for q_eff in q_effs:
        key = derivative_class_key(h, q_eff)
        if key not in f.certified:
            certify_derivative_class(f, h, q_eff, grid_n)
        if f.certified.get(key) is not True:
            return f"|f'|^{q_eff:g} of f={f.label} is not certified h-convex for h={h.label}"
    return None


def sweep(f: TestFunction, h: HFunction, theorem: int, variant: str,
          grid: ParamsGrid | None = None, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
          grid_n: int = DEFAULT_GRID_N) -> SweepResult:
    """Evaluate the chosen bound at every grid point and aggregate slacks.

    variant may be "first", "second", or "both".  Status is "uncertified"
    when a required hypothesis fails its checker (no numeric claims are made),
    "divergent" when a weight integral diverges, otherwise "pass"/"fail" by
    the slack criterion slack >= -SLACK_TOL at every point.
    """
    if grid is None:
        grid = ParamsGrid()
    variants = ("first", "second") if variant == "both" else (variant,)
    if any(v not in ("first", "second") for v in variants):
        raise DomainError(f"variant must be 'first', 'second' or 'both', got {variant!r}")

    result = SweepResult(function_name=f.label, h_name=h.label,
                         theorem=theorem, variant=variant, grid=grid)
    combos = _param_combos(theorem, grid, h.params.get("s"))
    reason = _uncertified_reason(f, h, theorem, variants, combos, grid_n)
    result.hypothesis_flags = {
        "h_nonneg": h.certified.get("nonneg", False),
        "h_supermultiplicative": h.certified.get("supermultiplicative", False),
        "h_superadditive": h.certified.get("superadditive", False),
        "h_dominates_identity": h.certified.get("dominates_identity", False),
        "derivative_consistent": f.certified.get("derivative_consistent", False),
        "derivative_bounded": f.certified.get("derivative_bounded", False),
    }
    if reason is not None:
        result.status = "uncertified"
        result.error = reason
        return result

    xs = np.linspace(f.a, f.b, grid.x_count)
    reports: list[BoundReport] = []
    try:
        for params in combos:
            for x in xs:
                lhs = _cached_lhs(f, params.alpha, float(x), cfg)
                reports.append(make_report(f, h, theorem, float(x), params,
                                           variants=variants, cfg=cfg,
                                           grid_n=grid_n, lhs_value=lhs))
    except DivergentBoundError as exc:
        result.status = "divergent"
        result.error = str(exc)
        result.reports = []
        return result

    reports.sort(key=lambda r: (r.x, r.params.alpha, r.params.p or 0.0, r.params.q or 0.0))
    result.reports = reports
    slacks = [(s, r.x) for r in reports for s in r.slacks()]
    result.violations = sum(1 for s, _ in slacks if s < -SLACK_TOL)
    min_slack, argmin_x = min(slacks, key=lambda t: (t[0], t[1]))
    result.min_slack = min_slack
    result.argmin_x = argmin_x
    result.status = "pass" if result.violations == 0 else "fail"
    return result


# ---------------------------------------------------------------------------
# tightness search
# ---------------------------------------------------------------------------


def tightness_search(f: TestFunction, h: HFunction, theorem: int, variant: str,
                     params: FracParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                     grid_n: int = DEFAULT_GRID_N) -> TightnessResult:
    """Minimize slack(x) = bound(x) - lhs(x) over [a, b]: a 101-point coarse
    scan localizes the minimum, then golden-section refinement runs on the
    bracketing interval until it is narrower than REFINE_TOL * (b - a).

    Slack has no guaranteed structure, so unimodality is only assumed inside
    the coarse bracket; the returned minimum never exceeds the coarse one.
    """
    variants = ("first", "second") if variant == "both" else (variant,)
    evaluations = 0

    def slack_at(x: float) -> float:
        nonlocal evaluations
        evaluations += 1
        report = make_report(f, h, theorem, x, params, variants=variants,
                             cfg=cfg, grid_n=grid_n)
        return report.min_slack()

    xs = np.linspace(f.a, f.b, 101)
    values = [slack_at(float(x)) for x in xs]
    i_min = int(np.argmin(values))
    coarse_min = values[i_min]
    best_x, best_val = float(xs[i_min]), coarse_min

    lo = float(xs[max(i_min - 1, 0)])
    hi = float(xs[min(i_min + 1, len(xs) - 1)])
    threshold = REFINE_TOL * (f.b - f.a)

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = slack_at(x1), slack_at(x2)
    while hi - lo > threshold:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = slack_at(x1)
            if f1 < best_val:
                best_x, best_val = x1, f1
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = slack_at(x2)
            if f2 < best_val:
                best_x, best_val = x2, f2
    return TightnessResult(x_star=best_x, min_slack=best_val,
                           coarse_min_slack=coarse_min, evaluations=evaluations)


# ---------------------------------------------------------------------------
# classical comparison
# ---------------------------------------------------------------------------


def compare_classical(h: HFunction, p: float | None = None,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> ClassicalComparison:
    """Compute the alpha = 1 weight factors and flag whether each beats its
    classical threshold strictly (certified against the quadrature error)."""
    factor, err = integrate_unit_with_error(
        lambda t: float(h(t * t)) + float(h(t - t * t)), cfg
    )
    thm1_better = factor + err < 0.5

    if p is None:
        return ClassicalComparison(h_label=h.label, thm1_factor=factor,
                                   thm1_better=thm1_better)
    if not (isinstance(p, (int, float)) and p > 1.0):
        raise DomainError(f"p must be > 1, got {p!r}")
    q = p / (p - 1.0)
    plain, err_plain = integrate_unit_with_error(
        lambda t: float(h(t)) + float(h(1.0 - t)), cfg
    )
    lhs_factor = plain ** (1.0 / q)
    err_prop = (abs(lhs_factor / (q * plain)) * err_plain) if plain > 0.0 else err_plain
    threshold = 0.5 * (1.0 + p) ** (1.0 / p)
    return ClassicalComparison(
        h_label=h.label, thm1_factor=factor, thm1_better=thm1_better, p=float(p),
        thm2_lhs_factor=lhs_factor, thm2_threshold=threshold,
        thm2_better=lhs_factor + err_prop < threshold,
    )


# ---------------------------------------------------------------------------
# identity residual sweep
# ---------------------------------------------------------------------------


def identity_sweep(f: TestFunction, alphas: tuple = DEFAULT_ALPHAS,
                   x_count: int = 21,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> IdentityResult:
    """Residual of the generating identity over x_count interior points for
    every alpha; the identity holds iff max residual <= IDENTITY_TOL."""
    if x_count < 1:
        raise DomainError(f"x_count must be >= 1, got {x_count}")
    xs = np.linspace(f.a, f.b, x_count + 2)[1:-1]
    result = IdentityResult(function_name=f.label, alphas=tuple(alphas))
    for alpha in alphas:
        for x in xs:
            residual = identity_residual(f, float(x), float(alpha), cfg)
            result.rows.append((float(alpha), float(x), residual))
            if residual > result.max_residual:
                result.max_residual = residual
    return result
