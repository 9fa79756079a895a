"""Registries of test functions f and weight functions h, with grid-based
checkers for every function-class property the bound evaluators gate on.

The checkers are samplers, not provers: a property "holds" when its defect is
below ``CHECK_TOL`` on a dense deterministic grid.  Registry functions carry
analytic justification in their docstrings; custom functions enter with all
claims false and must pass the checkers before any bound will accept them.

Grids avoid the endpoints of (0, 1) so that reciprocal-type weights such as
the Godunova-Levin 1/t stay evaluable on their open domain.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError

__all__ = [
    "HFunction",
    "TestFunction",
    "PropertyReport",
    "builtin_h",
    "builtin_f",
    "parse_h_spec",
    "parse_f_spec",
    "h_registry_names",
    "f_registry_names",
    "derivative_magnitude",
    "check_h_convex",
    "check_h_concave",
    "check_supermultiplicative",
    "check_superadditive",
    "check_dominates_identity",
    "check_nonneg",
    "certify_h",
    "certify_f",
    "certify_derivative_class",
]

#: Absolute tolerance on property defects: a defect above this is a violation.
CHECK_TOL = 1e-12

#: Points per grid axis used by default everywhere.
DEFAULT_GRID_N = 101

#: Step and tolerance of the central-difference derivative certification.
FD_EPS = 1e-5
FD_TOL = 1e-6

# Property names; these are the keys of the `certified` dicts and the flag
# names quoted by HypothesisError messages.
PROP_NONNEG = "nonneg"
PROP_SUPERMULTIPLICATIVE = "supermultiplicative"
PROP_SUPERADDITIVE = "superadditive"
PROP_DOMINATES_IDENTITY = "dominates_identity"
PROP_DERIVATIVE_CONSISTENT = "derivative_consistent"
PROP_DERIVATIVE_BOUNDED = "derivative_bounded"


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one grid check.

    ``worst_violation`` is the largest defect found (positive = violated);
    ``witness`` is the grid point attaining it, with ties broken toward the
    lexicographically smallest point.  ``tolerance`` is the threshold the
    defect was compared against: CHECK_TOL scaled by the magnitude of the
    quantities entering the inequality, so exact-equality cases survive
    double-precision rounding on large-valued grids.
    """

    holds: bool
    worst_violation: float
    witness: tuple
    tolerance: float = CHECK_TOL


@dataclass(eq=False)
class HFunction:
    """A weight function h on (a superset of) [0, 1] plus its claimed
    structural properties.

    Claims are declarations; the matching entry in ``certified`` is set only
    after the corresponding checker has confirmed the claim on a grid.
    """

    name: str
    params: dict
    fn: Callable
    domain_contains_unit: bool = True
    claimed_supermultiplicative: bool = False
    claimed_superadditive: bool = False
    claimed_dominates_identity: bool = False
    nonneg: bool = True
    divergent_weight: bool = False
    certified: dict = field(default_factory=dict)

    def __call__(self, t):
        return self.fn(t)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}:{inner}"

    def claimed(self, prop: str) -> bool:
        return {
            PROP_NONNEG: self.nonneg,
            PROP_SUPERMULTIPLICATIVE: self.claimed_supermultiplicative,
            PROP_SUPERADDITIVE: self.claimed_superadditive,
            PROP_DOMINATES_IDENTITY: self.claimed_dominates_identity,
        }[prop]


@dataclass(eq=False)
class TestFunction:
    """A differentiable f on [a, b] with analytic derivative and a certified
    derivative bound M = sup |f'|."""

    __test__ = False  # not a pytest collection target

    name: str
    a: float
    b: float
    f: Callable
    fprime: Callable
    M: float
    params: dict = field(default_factory=dict)
    hclass_of_derivative: list = field(default_factory=list)
    certified: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.a < 0.0:
            raise DomainError(f"domain must satisfy a >= 0, got a={self.a}")
        if not (self.a < self.b):
            raise DomainError(f"domain must satisfy a < b, got [{self.a}, {self.b}]")

    def __call__(self, t):
        return self.f(t)

    @property
    def label(self) -> str:
        shown = {k: v for k, v in self.params.items()}
        shown.setdefault("a", self.a)
        shown.setdefault("b", self.b)
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(shown.items()))
        return f"{self.name}:{inner}"


def derivative_magnitude(f: TestFunction, q: float = 1.0) -> Callable:
    """|f'|^q as a plain map, the quantity whose h-convexity the bounds need."""
    if q == 1.0:
        return lambda t: np.abs(f.fprime(t))
    return lambda t: np.abs(f.fprime(t)) ** q


# ---------------------------------------------------------------------------
# grid machinery
# ---------------------------------------------------------------------------


def _open_unit_grid(n: int) -> np.ndarray:
    """n equispaced points strictly inside (0, 1): k/(n+1), k = 1..n."""
    return np.arange(1, n + 1, dtype=float) / (n + 1.0)


def _vector_eval(fn: Callable, arr: np.ndarray) -> np.ndarray:
    """Evaluate fn elementwise, tolerating scalar-only callables."""
    try:
        out = np.asarray(fn(arr), dtype=float)
        if out.shape == arr.shape:
            return out
    except (TypeError, ValueError, ZeroDivisionError):
        pass
    flat = np.array([float(fn(v)) for v in arr.ravel()], dtype=float)
    return flat.reshape(arr.shape)


def _eval_weight(h: HFunction, pts: np.ndarray, what: str) -> np.ndarray:
    vals = _vector_eval(h.fn, pts)
    bad = ~np.isfinite(vals)
    if bad.any():
        t_bad = float(np.asarray(pts)[bad].ravel()[0])
        raise DomainError(f"h={h.label} undefined at {what}={t_bad!r}")
    return vals


def _worst(defect: np.ndarray, axes: tuple) -> tuple[float, tuple]:
    """Largest defect and its grid point; np.argmax takes the first maximum in
    C order, which is the lexicographically smallest index tuple."""
    worst = float(defect.max())
    idx = np.unravel_index(int(np.argmax(defect)), defect.shape)
    witness = tuple(float(ax[i]) for ax, i in zip(axes, idx))
    return worst, witness


def _scaled_tol(*arrays: np.ndarray) -> float:
    """Violation threshold scaled to the data: CHECK_TOL times the largest
    magnitude entering the inequality (at least 1, so O(1) grids keep the
    plain absolute tolerance)."""
    scale = 1.0
    for arr in arrays:
        scale = max(scale, float(np.abs(arr).max()))
    return CHECK_TOL * scale


def _report(defect: np.ndarray, axes: tuple, tol: float) -> PropertyReport:
    worst, witness = _worst(defect, axes)
    return PropertyReport(holds=worst <= tol, worst_violation=worst,
                          witness=witness, tolerance=tol)


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------


def _combination_defect(g: Callable, h: HFunction, a: float, b: float,
                        grid_n: int) -> tuple[np.ndarray, tuple, float]:
    """Defect array g(t x + (1-t) y) - h(t) g(x) - h(1-t) g(y) on the tensor
    grid of grid_n equispaced x, y in [a, b] and grid_n interior t values
    k/(grid_n+1), plus the grid axes and the scaled tolerance."""
    if grid_n < 3:
        raise DomainError(f"grid_n must be >= 3, got {grid_n}")
    xs = np.linspace(a, b, grid_n)
    ts = _open_unit_grid(grid_n)
    gx = _vector_eval(g, xs)
    if float(gx.min()) < -CHECK_TOL:
        raise DomainError(
            f"g must be non-negative on [{a}, {b}]; "
            f"g({xs[int(np.argmin(gx))]:.6g}) = {float(gx.min()):.6g}"
        )
    ht = _eval_weight(h, ts, "t")
    h1t = _eval_weight(h, 1.0 - ts, "1-t")
    X = xs[:, None, None]
    Y = xs[None, :, None]
    T = ts[None, None, :]
    mid = _vector_eval(g, T * X + (1.0 - T) * Y)
    left = ht[None, None, :] * gx[:, None, None]
    right = h1t[None, None, :] * gx[None, :, None]
    defect = mid - left - right
    tol = _scaled_tol(mid, left, right)
    return defect, (xs, xs, ts), tol


def check_h_convex(g: Callable, h: HFunction, a: float, b: float,
                   grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Grid check of h-convexity of a non-negative g on [a, b]:

        g(t x + (1-t) y) <= h(t) g(x) + h(1-t) g(y)

    The witness is (x, y, t) at the worst defect.
    """
    defect, axes, tol = _combination_defect(g, h, a, b, grid_n)
    return _report(defect, axes, tol)


def check_h_concave(g: Callable, h: HFunction, a: float, b: float,
                    grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Reversed-inequality counterpart of :func:`check_h_convex` (utility only;
    no bound evaluator gates on it)."""
    defect, axes, tol = _combination_defect(g, h, a, b, grid_n)
    return _report(-defect, axes, tol)


def check_supermultiplicative(h: HFunction, grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Grid check of h(x y) >= h(x) h(y) for x, y inside (0, 1)."""
    if grid_n < 3:
        raise DomainError(f"grid_n must be >= 3, got {grid_n}")
    us = _open_unit_grid(grid_n)
    hu = _eval_weight(h, us, "x")
    X = us[:, None]
    Y = us[None, :]
    hxy = _eval_weight(h, X * Y, "x*y")
    product = hu[:, None] * hu[None, :]
    defect = product - hxy
    return _report(defect, (us, us), _scaled_tol(product, hxy))


def check_superadditive(h: HFunction, grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Grid check of h(x + y) >= h(x) + h(y) for x, y in (0, 1/2] so the sum
    stays inside the unit interval."""
    if grid_n < 3:
        raise DomainError(f"grid_n must be >= 3, got {grid_n}")
    us = 0.5 * _open_unit_grid(grid_n)
    hu = _eval_weight(h, us, "x")
    X = us[:, None]
    Y = us[None, :]
    hsum = _eval_weight(h, X + Y, "x+y")
    defect = hu[:, None] + hu[None, :] - hsum
    return _report(defect, (us, us), _scaled_tol(hu, hsum))


def check_dominates_identity(h: HFunction, grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Grid check of h(t) >= t on the interior of (0, 1)."""
    if grid_n < 3:
        raise DomainError(f"grid_n must be >= 3, got {grid_n}")
    ts = _open_unit_grid(grid_n)
    ht = _eval_weight(h, ts, "t")
    defect = ts - ht
    return _report(defect, (ts,), _scaled_tol(ht))


def check_nonneg(h: HFunction, grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Grid check of h(t) >= 0 on the interior of (0, 1) plus the point 1."""
    ts = np.append(_open_unit_grid(grid_n), 1.0)
    ht = _eval_weight(h, ts, "t")
    defect = -ht
    return _report(defect, (ts,), _scaled_tol(ht))


_H_CHECKERS = {
    PROP_NONNEG: check_nonneg,
    PROP_SUPERMULTIPLICATIVE: check_supermultiplicative,
    PROP_SUPERADDITIVE: check_superadditive,
    PROP_DOMINATES_IDENTITY: check_dominates_identity,
}


def certify_h(h: HFunction, grid_n: int = DEFAULT_GRID_N) -> dict:
    """Run every structural checker on h, record the outcomes in
    ``h.certified``, and return the full reports keyed by property name."""
    reports = {}
    for prop, checker in _H_CHECKERS.items():
        report = checker(h, grid_n)
        reports[prop] = report
        h.certified[prop] = report.holds
    return reports


def certify_f(f: TestFunction, grid_n: int = DEFAULT_GRID_N) -> dict:
    """Certify the analytic derivative of f against central differences and
    the declared bound M against a dense sample of |f'|."""
    interior = np.linspace(f.a, f.b, grid_n + 2)[1:-1]
    approx = (_vector_eval(f.f, interior + FD_EPS) - _vector_eval(f.f, interior - FD_EPS)) / (2.0 * FD_EPS)
    exact = _vector_eval(f.fprime, interior)
    fd_defect = np.abs(approx - exact) - FD_TOL
    fd_worst, fd_witness = _worst(fd_defect, (interior,))
    fd_report = PropertyReport(holds=fd_worst <= 0.0,
                               worst_violation=fd_worst + FD_TOL,
                               witness=fd_witness)

    dense = np.linspace(f.a, f.b, 10 * grid_n + 1)
    mags = np.abs(_vector_eval(f.fprime, dense))
    m_defect = mags - f.M - CHECK_TOL
    m_worst, m_witness = _worst(m_defect, (dense,))
    m_report = PropertyReport(holds=m_worst <= 0.0,
                              worst_violation=m_worst + f.M + CHECK_TOL,
                              witness=m_witness)

    f.certified[PROP_DERIVATIVE_CONSISTENT] = fd_report.holds
    f.certified[PROP_DERIVATIVE_BOUNDED] = m_report.holds
    return {PROP_DERIVATIVE_CONSISTENT: fd_report, PROP_DERIVATIVE_BOUNDED: m_report}


def derivative_class_key(h: HFunction, q: float) -> str:
    return f"hconvex|{h.label}|q={q:g}"


def certify_derivative_class(f: TestFunction, h: HFunction, q: float = 1.0,
                             grid_n: int = DEFAULT_GRID_N) -> PropertyReport:
    """Certify that |f'|^q is h-convex on [f.a, f.b]; the outcome is cached on
    f under :func:`derivative_class_key`."""
    if q < 1.0:
        raise DomainError(f"q must be >= 1, got {q}")
    report = check_h_convex(derivative_magnitude(f, q), h, f.a, f.b, grid_n)
    f.certified[derivative_class_key(h, q)] = report.holds
    return report


# ---------------------------------------------------------------------------
# registries
# ---------------------------------------------------------------------------


def _require_params(name: str, params: dict, required: tuple, optional: tuple = ()):
    missing = [k for k in required if k not in params]
    if missing:
        raise ConfigError(f"{name} requires parameter(s) {', '.join(missing)}")
    unknown = [k for k in params if k not in required + optional]
    if unknown:
        raise ConfigError(f"{name} does not accept parameter(s) {', '.join(unknown)}")


def builtin_h(name: str, params: dict | None = None) -> HFunction:
    """Look up a registry weight function.

    identity  h(t) = t     supermultiplicative, superadditive, h(t) >= t (all equalities)
    power     h(t) = t^s, s in (0, 1]: supermultiplicative (equality),
              h(t) >= t on (0, 1); superadditive only at s = 1
    one       h(t) = 1     dominates the identity; not superadditive (1 < 2)
    godunova  h(t) = 1/t   on t > 0; its bound weights diverge near 1
    """
    params = dict(params or {})
    if name == "identity":
        _require_params(name, params, ())
        return HFunction(
            name=name, params={}, fn=lambda t: np.asarray(t, dtype=float) + 0.0,
            claimed_supermultiplicative=True,
            claimed_superadditive=True,
            claimed_dominates_identity=True,
        )
    if name == "power":
        _require_params(name, params, ("s",))
        s = float(params["s"])
        if not (0.0 < s <= 1.0):
            raise ConfigError(f"power requires s in (0, 1], got s={s}")
        return HFunction(
            name=name, params={"s": s},
            fn=lambda t, _s=s: np.asarray(t, dtype=float) ** _s,
            claimed_supermultiplicative=True,
            claimed_superadditive=(s == 1.0),
            claimed_dominates_identity=True,
        )
    if name == "one":
        _require_params(name, params, ())
        return HFunction(
            name=name, params={},
            fn=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            claimed_supermultiplicative=True,
            claimed_superadditive=False,
            claimed_dominates_identity=True,
        )
    if name == "godunova":
        _require_params(name, params, ())

        def _reciprocal(t):
            with np.errstate(divide="ignore"):
                return 1.0 / np.asarray(t, dtype=float)

        return HFunction(
            name=name, params={},
            fn=_reciprocal,
            domain_contains_unit=False,  # undefined at t = 0
            claimed_supermultiplicative=True,
            claimed_superadditive=False,
            claimed_dominates_identity=True,
            divergent_weight=True,
        )
    raise ConfigError(f"unknown h function {name!r}; known: {', '.join(h_registry_names())}")


def builtin_f(name: str, params: dict | None = None) -> TestFunction:
    """Look up a registry test function on a supplied domain [a, b], a >= 0.

    Every entry has an analytically exact derivative and exact M = sup |f'|:

    square           t^2;            M = 2b;   |f'| = 2t convex
    cube             t^3;            M = 3b^2; |f'| = 3t^2 convex
    exp              e^t;            M = e^b;  |f'| = e^t convex
    power_primitive  t^(s+1)/(s+1);  M = b^s;  |f'| = t^s, in the s-convex
                     class of the matching power weight (any exponent >= 1)
    linear           c t;            M = |c|
    const            c;              M = 0
    """
    params = dict(params or {})
    if "a" not in params or "b" not in params:
        raise ConfigError(f"{name} requires domain parameters a and b")
    a, b = float(params.pop("a")), float(params.pop("b"))
    if a < 0.0:
        raise DomainError(f"domain must satisfy a >= 0, got a={a}")
    if a >= b:
        raise DomainError(f"domain must satisfy a < b, got [{a}, {b}]")

    dominating = [("identity", None), ("power:s=0.5", None), ("power:s=0.75", None),
                  ("one", None)]
    if name == "square":
        _require_params(name, params, ())
        return TestFunction(
            name=name, a=a, b=b,
            f=lambda t: np.asarray(t, dtype=float) ** 2,
            fprime=lambda t: 2.0 * np.asarray(t, dtype=float),
            M=2.0 * b,
            hclass_of_derivative=dominating,
        )
    if name == "cube":
        _require_params(name, params, ())
        return TestFunction(
            name=name, a=a, b=b,
            f=lambda t: np.asarray(t, dtype=float) ** 3,
            fprime=lambda t: 3.0 * np.asarray(t, dtype=float) ** 2,
            M=3.0 * b * b,
            hclass_of_derivative=dominating,
        )
    if name == "exp":
        _require_params(name, params, ())
        return TestFunction(
            name=name, a=a, b=b,
            f=lambda t: np.exp(np.asarray(t, dtype=float)),
            fprime=lambda t: np.exp(np.asarray(t, dtype=float)),
            M=math.exp(b),
            hclass_of_derivative=dominating,
        )
    if name == "power_primitive":
        _require_params(name, params, ("s",))
        s = float(params["s"])
        if not (0.0 < s <= 1.0):
            raise ConfigError(f"power_primitive requires s in (0, 1], got s={s}")
        return TestFunction(
            name=name, a=a, b=b,
            f=lambda t, _s=s: np.asarray(t, dtype=float) ** (_s + 1.0) / (_s + 1.0),
            fprime=lambda t, _s=s: np.asarray(t, dtype=float) ** _s,
            M=b**s,
            params={"s": s},
            hclass_of_derivative=[(f"power:s={s:g}", None)],
        )
    if name == "linear":
        _require_params(name, params, (), ("c",))
        c = float(params.get("c", 1.0))
        return TestFunction(
            name=name, a=a, b=b,
            f=lambda t, _c=c: _c * np.asarray(t, dtype=float),
            fprime=lambda t, _c=c: np.full_like(np.asarray(t, dtype=float), _c),
            M=abs(c),
            params={"c": c},
            hclass_of_derivative=dominating,
        )
    if name == "const":
        _require_params(name, params, (), ("c",))
        c = float(params.get("c", 1.0))
        return TestFunction(
            name=name, a=a, b=b,
            f=lambda t, _c=c: np.full_like(np.asarray(t, dtype=float), _c),
            fprime=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            M=0.0,
            params={"c": c},
            hclass_of_derivative=dominating,
        )
    raise ConfigError(f"unknown f function {name!r}; known: {', '.join(f_registry_names())}")


def h_registry_names() -> tuple:
    return ("identity", "power", "one", "godunova")


def f_registry_names() -> tuple:
    return ("square", "cube", "exp", "power_primitive", "linear", "const")


# ---------------------------------------------------------------------------
# spec-string parsing ("name" or "name:key=value,key=value")
# ---------------------------------------------------------------------------


def _parse_spec(text: str) -> tuple[str, dict]:
    text = text.strip()
    if not text:
        raise ConfigError("empty function spec")
    name, _, tail = text.partition(":")
    params = {}
    if tail:
        for piece in tail.split(","):
            key, sep, value = piece.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"malformed parameter {piece!r} in spec {text!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise ConfigError(f"non-numeric value {value!r} in spec {text!r}") from None
    return name.strip(), params


def parse_h_spec(text: str) -> HFunction:
    name, params = _parse_spec(text)
    return builtin_h(name, params)


def parse_f_spec(text: str) -> TestFunction:
    name, params = _parse_spec(text)
    return builtin_f(name, params)
