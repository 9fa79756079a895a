"""Evaluators for the fractional Ostrowski-type quantities: the left-hand
side, the generating integral identity, three bound families (each with a
direct variant and a strengthened second variant), their closed forms for the
power weight h(t) = t^s, and the classical first-order bound.

Family ids and what each variant requires of h beyond non-negativity:

    1   direct h-convex estimate of |f'|;      second variant needs h
        supermultiplicative and h(t) >= t
    2   Holder-inequality route for |f'|^q,    q conjugate to p > 1;
        second variant needs h superadditive
    3   power-mean route for |f'|^q, q >= 1;   second variant as family 1

Evaluators refuse to produce numbers when a certified hypothesis flag the
chosen variant needs is missing (``HypothesisError`` naming the flag); pass
``force=True`` for exploratory evaluation, which marks the result uncertified.
Weight integrals that diverge (for example the Godunova-Levin weight 1/t,
whose h(1-t) factor is not integrable) raise ``DivergentBoundError`` instead
of returning large finite numbers.
"""

import math
from dataclasses import dataclass, field

from .errors import DivergentBoundError, DivergentIntegralError, DomainError, HypothesisError
from .fracint import DEFAULT_QUADRATURE, FracParams, QuadratureConfig, integrate_unit, rl_left, rl_right
from .funcs import (
    PROP_DOMINATES_IDENTITY,
    PROP_NONNEG,
    PROP_SUPERADDITIVE,
    PROP_SUPERMULTIPLICATIVE,
    HFunction,
    TestFunction,
    certify_derivative_class,
    certify_f,
    certify_h,
    derivative_class_key,
)
from .specfun import gamma

__all__ = [
    "BoundReport",
    "SLACK_TOL",
    "VARIANT_ORDER_TOL",
    "IDENTITY_TOL",
    "ostrowski_signed",
    "ostrowski_lhs",
    "identity_rhs",
    "identity_residual",
    "bound_classical",
    "bound_hconvex",
    "bound_holder",
    "bound_power_mean",
    "theorem_bound",
    "power_closed_bound",
    "reduction_alpha1_bound",
    "make_report",
    "required_h_flags",
    "clear_weight_cache",
]

#: Slack below -SLACK_TOL counts as a bound violation (looser than the
#: quadrature tolerance to absorb error accumulated across the two fractional
#: integrals of the left-hand side).
SLACK_TOL = 1e-8

#: Allowed float noise in the first-variant <= second-variant ordering.
VARIANT_ORDER_TOL = 1e-10

#: Contract on the residual of the generating identity.
IDENTITY_TOL = 1e-8

THEOREMS = (1, 2, 3)
VARIANTS = ("first", "second")

_REQUIRED_H_FLAGS = {
    (1, "first"): (PROP_NONNEG,),
    (1, "second"): (PROP_NONNEG, PROP_SUPERMULTIPLICATIVE, PROP_DOMINATES_IDENTITY),
    (2, "first"): (PROP_NONNEG,),
    (2, "second"): (PROP_NONNEG, PROP_SUPERADDITIVE),
    (3, "first"): (PROP_NONNEG,),
    (3, "second"): (PROP_NONNEG, PROP_SUPERMULTIPLICATIVE, PROP_DOMINATES_IDENTITY),
}


def required_h_flags(theorem: int, variant: str) -> tuple:
    """Certified properties of h that the (theorem, variant) pair gates on."""
    try:
        return _REQUIRED_H_FLAGS[(theorem, variant)]
    except KeyError:
        raise DomainError(f"unknown bound family/variant ({theorem!r}, {variant!r})") from None


def _check_interval(a: float, b: float, x: float):
    if not (a < b):
        raise DomainError(f"need a < b, got [{a}, {b}]")
    if not (a <= x <= b):
        raise DomainError(f"x={x} outside [{a}, {b}]")


def _check_alpha(alpha: float):
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0.0):
        raise DomainError(f"alpha must be positive, got {alpha!r}")


def _require_certified(h: HFunction, theorem: int, variant: str, force: bool) -> bool:
    """True when every h-side flag for the pair is certified; raises unless
    forced."""
    ok = True
    for prop in required_h_flags(theorem, variant):
        if h.certified.get(prop) is not True:
            ok = False
            if not force:
                raise HypothesisError(
                    f"h={h.label} lacks certified property {prop!r} required by "
                    f"bound family {theorem} variant {variant!r}; run certify_h "
                    f"or pass force=True for an uncertified evaluation"
                )
    return ok


# ---------------------------------------------------------------------------
# left-hand side and the generating identity
# ---------------------------------------------------------------------------


def ostrowski_signed(f: TestFunction, x: float, alpha: float,
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Signed deviation of f(x) from its two-sided fractional means:

        ((x-a)^a + (b-x)^a)/(b-a) * f(x)
        - gamma(alpha+1)/(b-a) * [ I_right(f; x->a) + I_left(f; x->b) ]

    where I_right is the right fractional integral anchored at x evaluated at
    a, and I_left the left fractional integral anchored at x evaluated at b.
    """
    a, b = f.a, f.b
    _check_interval(a, b, x)
    _check_alpha(alpha)
    mean_weight = ((x - a) ** alpha + (b - x) ** alpha) / (b - a)
    right_at_a = rl_right(f, a, x, alpha, cfg)   # integral over [a, x] of (t-a)^(alpha-1) f
    left_at_b = rl_left(f, x, b, alpha, cfg)     # integral over [x, b] of (b-t)^(alpha-1) f
    return mean_weight * float(f(x)) - gamma(alpha + 1.0) / (b - a) * (right_at_a + left_at_b)


def ostrowski_lhs(f: TestFunction, x: float, alpha: float,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Absolute value of :func:`ostrowski_signed`; the quantity every bound
    dominates."""
    return abs(ostrowski_signed(f, x, alpha, cfg))


def identity_rhs(f: TestFunction, x: float, alpha: float,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Right-hand side of the generating identity: the signed combination

          (x-a)^(alpha+1)/(b-a) * int_0^1 t^alpha f'(t x + (1-t) a) dt
        - (b-x)^(alpha+1)/(b-a) * int_0^1 t^alpha f'(t x + (1-t) b) dt
    """
    a, b = f.a, f.b
    _check_interval(a, b, x)
    _check_alpha(alpha)
    first = 0.0
    if x > a:
        first = integrate_unit(
            lambda t: t**alpha * float(f.fprime(t * x + (1.0 - t) * a)), cfg
        )
    second = 0.0
    if x < b:
        second = integrate_unit(
            lambda t: t**alpha * float(f.fprime(t * x + (1.0 - t) * b)), cfg
        )
    return ((x - a) ** (alpha + 1.0) * first - (b - x) ** (alpha + 1.0) * second) / (b - a)


def identity_residual(f: TestFunction, x: float, alpha: float,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """|signed LHS - identity RHS|; both sides are computed by independent
    quadratures, so this certifies the identity numerically (contract:
    <= IDENTITY_TOL for registry functions, alpha in [0.25, 3], interior x).
    """
    return abs(ostrowski_signed(f, x, alpha, cfg) - identity_rhs(f, x, alpha, cfg))


# ---------------------------------------------------------------------------
# weight integrals (shared by the bound families, cached per (h, kind, alpha))
# ---------------------------------------------------------------------------

_WEIGHT_CACHE: dict = {}
_CACHE_PINS: list = []  # keeps cached h objects alive so ids stay unique


def clear_weight_cache():
    _WEIGHT_CACHE.clear()
    _CACHE_PINS.clear()


def _cached_weight(h: HFunction, kind: str, alpha: float | None,
                   cfg: QuadratureConfig, integrand) -> float:
    key = (id(h), kind, alpha, cfg)
    if key not in _WEIGHT_CACHE:
        _CACHE_PINS.append(h)
        try:
            _WEIGHT_CACHE[key] = integrate_unit(integrand, cfg)
        except DivergentIntegralError as exc:
            raise DivergentBoundError(
                f"weight integral {kind} diverges for h={h.label}: {exc}"
            ) from exc
    return _WEIGHT_CACHE[key]


def weight_direct(h: HFunction, alpha: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """int_0^1 t^alpha [h(t) + h(1-t)] dt  (families 1 and 3, first variant)."""
    return _cached_weight(
        h, "direct", alpha, cfg,
        lambda t: t**alpha * (float(h(t)) + float(h(1.0 - t))),
    )


def weight_composed(h: HFunction, alpha: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """int_0^1 [h(t^(alpha+1)) + h(t^alpha (1-t))] dt  (second variants)."""
    return _cached_weight(
        h, "composed", alpha, cfg,
        lambda t: float(h(t ** (alpha + 1.0))) + float(h(t**alpha * (1.0 - t))),
    )


def weight_plain(h: HFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """int_0^1 [h(t) + h(1-t)] dt  (family 2, first variant)."""
    return _cached_weight(
        h, "plain", None, cfg,
        lambda t: float(h(t)) + float(h(1.0 - t)),
    )


def weight_alpha1(h: HFunction, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """int_0^1 [h(t^2) + h(t - t^2)] dt, the alpha = 1 reduction factor that
    the classical comparison thresholds against 1/2."""
    return _cached_weight(
        h, "alpha1", None, cfg,
        lambda t: float(h(t * t)) + float(h(t - t * t)),
    )


# ---------------------------------------------------------------------------
# classical bound and the three bound families
# ---------------------------------------------------------------------------


def bound_classical(M: float, a: float, b: float, x: float) -> float:
    """First-order Ostrowski bound M (b-a) [1/4 + (x - (a+b)/2)^2 / (b-a)^2],
    identically M [(x-a)^2 + (b-x)^2] / (2 (b-a))."""
    if not (a < b):
        raise DomainError(f"need a < b, got [{a}, {b}]")
    if M < 0.0:
        raise DomainError(f"derivative bound M must be >= 0, got {M}")
    _check_interval(a, b, x)
    mid = 0.5 * (a + b)
    return M * (b - a) * (0.25 + (x - mid) ** 2 / (b - a) ** 2)


def _prefactor(a: float, b: float, x: float, alpha: float) -> float:
    return ((x - a) ** (alpha + 1.0) + (b - x) ** (alpha + 1.0)) / (b - a)


def bound_hconvex(h: HFunction, M: float, a: float, b: float, x: float, alpha: float,
                  variant: str = "first", cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                  force: bool = False) -> float:
    """Family-1 bound: M [(x-a)^(alpha+1) + (b-x)^(alpha+1)]/(b-a) times the
    direct weight (first variant) or the composed weight (second variant)."""
    _check_interval(a, b, x)
    _check_alpha(alpha)
    _require_certified(h, 1, variant, force)
    if variant == "first":
        w = weight_direct(h, alpha, cfg)
    elif variant == "second":
        w = weight_composed(h, alpha, cfg)
    else:
        raise DomainError(f"variant must be 'first' or 'second', got {variant!r}")
    return M * _prefactor(a, b, x, alpha) * w


def bound_holder(h: HFunction, M: float, a: float, b: float, x: float, alpha: float,
                 p: float, variant: str = "first",
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE, force: bool = False) -> float:
    """Family-2 bound (Holder route): the geometric prefactor divided by
    (1 + p alpha)^(1/p), times the plain weight to the power 1/q (first
    variant) or h(1)^(1/q) (second variant), q conjugate to p."""
    _check_interval(a, b, x)
    _check_alpha(alpha)
    if not (isinstance(p, (int, float)) and p > 1.0):
        raise DomainError(f"p must be > 1, got {p!r}")
    q = p / (p - 1.0)
    _require_certified(h, 2, variant, force)
    if variant == "first":
        core = weight_plain(h, cfg) ** (1.0 / q)
    elif variant == "second":
        h1 = float(h(1.0))
        if not (math.isfinite(h1) and h1 >= 0.0):
            raise DomainError(f"h={h.label} must be finite and non-negative at 1, got {h1}")
        core = h1 ** (1.0 / q)
    else:
        raise DomainError(f"variant must be 'first' or 'second', got {variant!r}")
    return M * _prefactor(a, b, x, alpha) / (1.0 + p * alpha) ** (1.0 / p) * core


def bound_power_mean(h: HFunction, M: float, a: float, b: float, x: float, alpha: float,
                     q: float, variant: str = "first",
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE, force: bool = False) -> float:
    """Family-3 bound (power-mean route): the family-1 weight enters under a
    1/q power with an extra (1 + alpha)^(1/q - 1) factor; q = 1 recovers the
    family-1 bound exactly."""
    _check_interval(a, b, x)
    _check_alpha(alpha)
    if not (isinstance(q, (int, float)) and q >= 1.0):
        raise DomainError(f"q must be >= 1, got {q!r}")
    _require_certified(h, 3, variant, force)
    if variant == "first":
        w = weight_direct(h, alpha, cfg)
    elif variant == "second":
        w = weight_composed(h, alpha, cfg)
    else:
        raise DomainError(f"variant must be 'first' or 'second', got {variant!r}")
    return M * _prefactor(a, b, x, alpha) * w ** (1.0 / q) / (1.0 + alpha) ** (1.0 - 1.0 / q)


def theorem_bound(theorem: int, variant: str, h: HFunction, M: float,
                  a: float, b: float, x: float, alpha: float,
                  p: float | None = None, q: float | None = None,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE, force: bool = False) -> float:
    """Dispatch a bound family by its numeric id (1, 2, 3)."""
    if theorem == 1:
        return bound_hconvex(h, M, a, b, x, alpha, variant, cfg, force)
    if theorem == 2:
        if p is None:
            raise DomainError("bound family 2 requires the Holder exponent p")
        return bound_holder(h, M, a, b, x, alpha, p, variant, cfg, force)
    if theorem == 3:
        if q is None:
            raise DomainError("bound family 3 requires the mean exponent q")
        return bound_power_mean(h, M, a, b, x, alpha, q, variant, cfg, force)
    raise DomainError(f"unknown bound family {theorem!r}; expected 1, 2 or 3")


# ---------------------------------------------------------------------------
# closed forms for the power weight h(t) = t^s
# ---------------------------------------------------------------------------


def _power_weight_direct_closed(alpha: float, s: float) -> float:
    """Closed form of the direct weight for h = t^s:
    (1/(alpha+s+1)) [1 + gamma(alpha+1) gamma(s+1) / gamma(alpha+s+1)].

    Derivation: int t^(alpha+s) = 1/(alpha+s+1) and int t^alpha (1-t)^s =
    B(alpha+1, s+1) = gamma(alpha+1) gamma(s+1) / ((alpha+s+1) gamma(alpha+s+1)).
    """
    return (1.0 + gamma(alpha + 1.0) * gamma(s + 1.0) / gamma(alpha + s + 1.0)) / (alpha + s + 1.0)


def _power_weight_composed_closed(alpha: float, s: float) -> float:
    """Closed form of the composed weight for h = t^s:
    (1/(alpha s + s + 1)) [1 + gamma(alpha s + 1) gamma(s+1) / gamma(alpha s + s + 1)].
    """
    als = alpha * s
    return (1.0 + gamma(als + 1.0) * gamma(s + 1.0) / gamma(als + s + 1.0)) / (als + s + 1.0)


def power_closed_bound(theorem: int, variant: str, s: float, M: float,
                       a: float, b: float, x: float, alpha: float,
                       p_or_q: float | None = None) -> float:
    """Gamma/Beta closed form of a bound for the power weight h(t) = t^s; no
    quadrature is involved, so this is the independent cross-check of the
    quadrature-backed evaluators (they must agree to 1e-10 relative).

    Family 2 first variant uses the plain-weight closed form (2/(s+1))^(1/q);
    its second variant reduces to the bare prefactor since h(1) = 1.  Family 3
    uses the q-th roots of the family-1 weight factors.
    """
    if not (0.0 < s <= 1.0):
        raise DomainError(f"s must lie in (0, 1], got {s}")
    _check_interval(a, b, x)
    _check_alpha(alpha)
    if variant not in VARIANTS:
        raise DomainError(f"variant must be 'first' or 'second', got {variant!r}")
    pref = _prefactor(a, b, x, alpha)
    if theorem == 1:
        w = (_power_weight_direct_closed(alpha, s) if variant == "first"
             else _power_weight_composed_closed(alpha, s))
        return M * pref * w
    if theorem == 2:
        p = p_or_q
        if not (isinstance(p, (int, float)) and p > 1.0):
            raise DomainError(f"bound family 2 requires p > 1, got {p!r}")
        q = p / (p - 1.0)
        core = (2.0 / (s + 1.0)) ** (1.0 / q) if variant == "first" else 1.0
        return M * pref / (1.0 + p * alpha) ** (1.0 / p) * core
    if theorem == 3:
        q = p_or_q
        if not (isinstance(q, (int, float)) and q >= 1.0):
            raise DomainError(f"bound family 3 requires q >= 1, got {q!r}")
        w = (_power_weight_direct_closed(alpha, s) if variant == "first"
             else _power_weight_composed_closed(alpha, s))
        return M * pref * w ** (1.0 / q) / (1.0 + alpha) ** (1.0 - 1.0 / q)
    raise DomainError(f"unknown bound family {theorem!r}; expected 1, 2 or 3")


def reduction_alpha1_bound(h: HFunction, M: float, a: float, b: float, x: float,
                           p: float | None = None,
                           cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                           force: bool = False) -> float:
    """The alpha = 1 reductions used in the classical comparison.

    Without p: M [(x-a)^2 + (b-x)^2]/(b-a) * int_0^1 [h(t^2) + h(t-t^2)] dt,
    which equals the family-1 second variant at alpha = 1.  With p > 1: the
    family-2 first variant at alpha = 1, whose denominator becomes (1+p)^(1/p).
    """
    _check_interval(a, b, x)
    geom = ((x - a) ** 2 + (b - x) ** 2) / (b - a)
    if p is None:
        _require_certified(h, 1, "second", force)
        return M * geom * weight_alpha1(h, cfg)
    if not (isinstance(p, (int, float)) and p > 1.0):
        raise DomainError(f"p must be > 1, got {p!r}")
    _require_certified(h, 2, "first", force)
    q = p / (p - 1.0)
    return M * geom / (1.0 + p) ** (1.0 / p) * weight_plain(h, cfg) ** (1.0 / q)


# ---------------------------------------------------------------------------
# per-point reports
# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    """One evaluation point: left-hand side, the requested bound variant(s),
    and their slacks.  ``extrapolated`` marks x at a domain endpoint, where
    the bound is the one-sided limit (a vanishing prefactor term)."""

    x: float
    params: FracParams
    lhs: float
    bound_first: float | None = None
    bound_second: float | None = None
    slack_first: float | None = None
    slack_second: float | None = None
    hypothesis_flags: dict = field(default_factory=dict)
    certified: bool = True
    extrapolated: bool = False

    def slacks(self) -> list:
        return [s for s in (self.slack_first, self.slack_second) if s is not None]

    def min_slack(self) -> float:
        return min(self.slacks())


def _effective_q(theorem: int, params: FracParams) -> float:
    if theorem == 1:
        return 1.0
    if theorem == 2:
        if params.p is None:
            raise DomainError("bound family 2 requires the Holder exponent p")
        return params.p / (params.p - 1.0)
    if theorem == 3:
        if params.q is None:
            raise DomainError("bound family 3 requires the mean exponent q")
        return params.q
    raise DomainError(f"unknown bound family {theorem!r}")


def make_report(f: TestFunction, h: HFunction, theorem: int, x: float,
                params: FracParams, variants: tuple = ("first",),
                cfg: QuadratureConfig = DEFAULT_QUADRATURE, force: bool = False,
                grid_n: int = 101, lhs_value: float | None = None) -> BoundReport:
    """Evaluate the left-hand side and the requested bound variants at one
    point, certifying every hypothesis on the way.

    Certification is cached on the function objects: h's structural flags via
    ``certify_h``, f's derivative consistency/bound via ``certify_f``, and the
    h-convexity of |f'|^q via ``certify_derivative_class``.
    """
    if not variants or any(v not in VARIANTS for v in variants):
        raise DomainError(f"variants must be drawn from {VARIANTS}, got {variants!r}")
    alpha = params.alpha

    if not h.certified:
        certify_h(h, grid_n)
    if not f.certified:
        certify_f(f, grid_n)
    q_eff = _effective_q(theorem, params)
    class_key = derivative_class_key(h, q_eff)
    if class_key not in f.certified:
        certify_derivative_class(f, h, q_eff, grid_n)

    flags = {
        "h_nonneg": h.certified.get(PROP_NONNEG, False),
        "h_supermultiplicative": h.certified.get(PROP_SUPERMULTIPLICATIVE, False),
        "h_superadditive": h.certified.get(PROP_SUPERADDITIVE, False),
        "h_dominates_identity": h.certified.get(PROP_DOMINATES_IDENTITY, False),
        "derivative_consistent": f.certified.get("derivative_consistent", False),
        "derivative_bounded": f.certified.get("derivative_bounded", False),
        "derivative_class_hconvex": f.certified.get(class_key, False),
    }

    f_side_ok = (flags["derivative_consistent"] and flags["derivative_bounded"]
                 and flags["derivative_class_hconvex"])
    if not f_side_ok and not force:
        missing = [k for k in ("derivative_consistent", "derivative_bounded",
                               "derivative_class_hconvex") if not flags[k]]
        raise HypothesisError(
            f"f={f.label} lacks certified propert{'y' if len(missing) == 1 else 'ies'} "
            f"{', '.join(repr(m) for m in missing)} required by bound family {theorem}"
        )

    certified = f_side_ok
    lhs = ostrowski_lhs(f, x, alpha, cfg) if lhs_value is None else lhs_value
    report = BoundReport(
        x=x, params=params, lhs=lhs, hypothesis_flags=flags,
        extrapolated=(x == f.a or x == f.b),
    )
    for variant in variants:
        certified = _require_certified(h, theorem, variant, force) and certified
        value = theorem_bound(theorem, variant, h, f.M, f.a, f.b, x, alpha,
                              p=params.p, q=params.q, cfg=cfg, force=force)
        if variant == "first":
            report.bound_first = value
            report.slack_first = value - lhs
        else:
            report.bound_second = value
            report.slack_second = value - lhs
    report.certified = certified
    return report
