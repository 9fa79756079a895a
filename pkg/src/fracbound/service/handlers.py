"""Transport-agnostic handlers: each maps a request model to a response
model.  The FastAPI routes and the CLI both dispatch here, so local and
remote runs produce identical payloads.
"""

from ..bounds import IDENTITY_TOL, SLACK_TOL, power_closed_bound, theorem_bound
from ..errors import ConfigError
from ..fracint import FracParams, QuadratureConfig
from ..funcs import (
    PROP_DOMINATES_IDENTITY,
    PROP_NONNEG,
    PROP_SUPERADDITIVE,
    PROP_SUPERMULTIPLICATIVE,
    builtin_h,
    certify_derivative_class,
    certify_f,
    certify_h,
    f_registry_names,
    h_registry_names,
    parse_f_spec,
    parse_h_spec,
)
from ..verify import ParamsGrid, compare_classical, identity_sweep, sweep, tightness_search
from . import models

#: Relative tolerance of the closed-form vs quadrature cross-check.
COROLLARY_TOL = 1e-10

_H_CLAIM_PROPS = (PROP_NONNEG, PROP_SUPERMULTIPLICATIVE, PROP_SUPERADDITIVE,
                  PROP_DOMINATES_IDENTITY)


def _quad_config(overrides: models.QuadratureOverrides) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=overrides.abs_tol, rel_tol=overrides.rel_tol,
                            max_subdivisions=overrides.max_subdivisions)


def _prop_model(report) -> models.PropertyReportModel:
    return models.PropertyReportModel(
        holds=report.holds,
        worst_violation=float(report.worst_violation),
        witness=[float(w) for w in report.witness],
    )


def handle_check_props(req: models.CheckPropsRequest) -> models.CheckPropsResponse:
    """Run the property checkers for a weight function or a test function and
    compare the outcomes against the declared claims."""
    if req.f is None and req.h is None:
        raise ConfigError("check-props needs an h spec, an f spec, or both")
    if req.f is not None:
        f = parse_f_spec(req.f)
        checks = {name: _prop_model(rep) for name, rep in certify_f(f, req.grid_n).items()}
        claims = {"derivative_consistent": True, "derivative_bounded": True}
        if req.h is not None:
            h = parse_h_spec(req.h)
            rep = certify_derivative_class(f, h, req.q, req.grid_n)
            checks[f"derivative_class_hconvex[{h.label},q={req.q:g}]"] = _prop_model(rep)
            claims[f"derivative_class_hconvex[{h.label},q={req.q:g}]"] = True
        consistent = all(m.holds for m in checks.values())
        return models.CheckPropsResponse(
            target=f.label, kind="f", claims=claims, checks=checks,
            consistent=consistent, status="pass" if consistent else "fail",
        )
    h = parse_h_spec(req.h)
    reports = certify_h(h, req.grid_n)
    checks = {name: _prop_model(rep) for name, rep in reports.items()}
    claims = {prop: h.claimed(prop) for prop in _H_CLAIM_PROPS}
    consistent = all(claims[prop] == checks[prop].holds for prop in _H_CLAIM_PROPS)
    return models.CheckPropsResponse(
        target=h.label, kind="h", claims=claims, checks=checks,
        consistent=consistent, status="pass" if consistent else "fail",
    )


def handle_identity(req: models.IdentityRequest) -> models.IdentityResponse:
    """Residual sweep of the generating identity over the requested functions."""
    cfg = _quad_config(req.quadrature)
    rows: list[models.IdentityRow] = []
    max_residual = 0.0
    for spec in req.f:
        f = parse_f_spec(spec)
        result = identity_sweep(f, tuple(req.alphas), req.x_count, cfg)
        rows.extend(
            models.IdentityRow(f=f.label, alpha=alpha, x=x, residual=res)
            for alpha, x, res in result.rows
        )
        max_residual = max(max_residual, result.max_residual)
    return models.IdentityResponse(
        rows=rows, max_residual=max_residual, tolerance=IDENTITY_TOL,
        status="pass" if max_residual <= IDENTITY_TOL else "fail",
    )


def _report_model(report) -> models.BoundReportModel:
    p = report.params
    return models.BoundReportModel(
        x=report.x, alpha=p.alpha, s=p.s, p=p.p, q=p.q, lhs=report.lhs,
        bound_first=report.bound_first, slack_first=report.slack_first,
        bound_second=report.bound_second, slack_second=report.slack_second,
        certified=report.certified, extrapolated=report.extrapolated,
    )


def handle_sweep(req: models.SweepRequest) -> models.SweepResponse:
    """Verify one bound family over the full (x, alpha, exponent) grid."""
    f = parse_f_spec(req.f)
    h = parse_h_spec(req.h)
    grid = ParamsGrid(alphas=tuple(req.alphas), x_count=req.x_count,
                      ps=tuple(req.ps), qs=tuple(req.qs))
    result = sweep(f, h, req.theorem, req.variant, grid,
                   _quad_config(req.quadrature), req.grid_n)
    return models.SweepResponse(
        function_name=result.function_name, h_name=result.h_name,
        theorem=result.theorem, variant=req.variant,
        alphas=list(grid.alphas), x_count=grid.x_count,
        ps=list(grid.ps), qs=list(grid.qs),
        hypothesis_flags=result.hypothesis_flags, status=result.status,
        violations=result.violations, min_slack=result.min_slack,
        argmin_x=result.argmin_x, error=result.error,
        reports=[_report_model(r) for r in result.reports],
    )


def handle_tightness(req: models.TightnessRequest) -> models.TightnessResponse:
    """Golden-section slack minimization for one parameter point."""
    f = parse_f_spec(req.f)
    h = parse_h_spec(req.h)
    s = h.params.get("s")
    if req.theorem == 2:
        if req.p is None:
            raise ConfigError("bound family 2 requires p")
        params = FracParams.holder(alpha=req.alpha, p=req.p, s=s)
    elif req.theorem == 3:
        if req.q is None:
            raise ConfigError("bound family 3 requires q")
        params = FracParams(alpha=req.alpha, q=req.q, s=s)
    else:
        params = FracParams(alpha=req.alpha, s=s)
    result = tightness_search(f, h, req.theorem, req.variant, params,
                              _quad_config(req.quadrature))
    return models.TightnessResponse(
        function_name=f.label, h_name=h.label, theorem=req.theorem,
        variant=req.variant, alpha=req.alpha, p=params.p, q=params.q,
        x_star=result.x_star, min_slack=result.min_slack,
        coarse_min_slack=result.coarse_min_slack, evaluations=result.evaluations,
        status="pass" if result.min_slack >= -SLACK_TOL else "fail",
    )


def handle_compare_classical(req: models.CompareClassicalRequest) -> models.CompareClassicalResponse:
    """Evaluate the classical-comparison thresholds for a weight function."""
    h = parse_h_spec(req.h)
    record = compare_classical(h, req.p, _quad_config(req.quadrature))
    return models.CompareClassicalResponse(
        h_name=record.h_label, thm1_factor=record.thm1_factor,
        thm1_better=record.thm1_better, p=record.p,
        thm2_lhs_factor=record.thm2_lhs_factor,
        thm2_threshold=record.thm2_threshold, thm2_better=record.thm2_better,
    )


def handle_corollary(req: models.CorollaryRequest) -> models.CorollaryResponse:
    """Cross-check the power-weight closed forms against the quadrature-backed
    evaluators.  This is an arithmetic check, so hypothesis gating is bypassed
    (the family-2 second variant is compared even for s < 1, where the weight
    is not superadditive)."""
    cfg = _quad_config(req.quadrature)
    rows: list[models.CorollaryRow] = []
    max_rel = 0.0
    for s in req.s_values:
        h = builtin_h("power", {"s": s})
        certify_h(h)
        for theorem in req.theorems:
            pq = req.p if theorem == 2 else (req.q if theorem == 3 else None)
            for variant in ("first", "second"):
                for alpha in req.alphas:
                    closed = power_closed_bound(theorem, variant, s, req.M,
                                                req.a, req.b, req.x, alpha, pq)
                    quadrature = theorem_bound(
                        theorem, variant, h, req.M, req.a, req.b, req.x, alpha,
                        p=req.p if theorem == 2 else None,
                        q=req.q if theorem == 3 else None,
                        cfg=cfg, force=True,
                    )
                    scale = max(abs(closed), abs(quadrature))
                    rel = abs(closed - quadrature) / scale if scale > 0 else 0.0
                    max_rel = max(max_rel, rel)
                    rows.append(models.CorollaryRow(
                        theorem=theorem, variant=variant, s=s, alpha=alpha,
                        p=req.p if theorem == 2 else None,
                        q=(req.p / (req.p - 1.0)) if theorem == 2 else
                          (req.q if theorem == 3 else None),
                        closed_form=closed, quadrature=quadrature,
                        rel_err=rel, ok=rel <= COROLLARY_TOL,
                    ))
    return models.CorollaryResponse(
        rows=rows, max_rel_err=max_rel, tolerance=COROLLARY_TOL,
        status="pass" if max_rel <= COROLLARY_TOL else "fail",
    )


_H_DESCRIPTIONS = {
    "identity": "h(t) = t; the ordinary convexity weight",
    "power": "h(t) = t^s for s in (0, 1]; the s-convexity weight",
    "one": "h(t) = 1; the P-function weight",
    "godunova": "h(t) = 1/t on t > 0; bound weights diverge near 1",
}

_F_DESCRIPTIONS = {
    "square": "f(t) = t^2 on [a, b]; M = 2b",
    "cube": "f(t) = t^3 on [a, b]; M = 3b^2",
    "exp": "f(t) = e^t on [a, b]; M = e^b",
    "power_primitive": "f(t) = t^(s+1)/(s+1); f' = t^s; M = b^s",
    "linear": "f(t) = c t; M = |c|",
    "const": "f(t) = c; M = 0",
}

_H_PARAMS = {"identity": [], "power": ["s"], "one": [], "godunova": []}
_F_PARAMS = {
    "square": ["a", "b"], "cube": ["a", "b"], "exp": ["a", "b"],
    "power_primitive": ["a", "b", "s"], "linear": ["a", "b", "c"],
    "const": ["a", "b", "c"],
}

_H_CLAIM_EXAMPLES = {"power": {"s": 0.5}}


def handle_registry() -> models.RegistryResponse:
    """Describe the built-in registries (claims shown for default parameters)."""
    h_entries = []
    for name in h_registry_names():
        h = builtin_h(name, _H_CLAIM_EXAMPLES.get(name, {}))
        h_entries.append(models.RegistryEntry(
            name=name, parameters=_H_PARAMS[name],
            description=_H_DESCRIPTIONS[name],
            claims={prop: h.claimed(prop) for prop in _H_CLAIM_PROPS},
        ))
    f_entries = [
        models.RegistryEntry(name=name, parameters=_F_PARAMS[name],
                             description=_F_DESCRIPTIONS[name])
        for name in f_registry_names()
    ]
    return models.RegistryResponse(h_functions=h_entries, f_functions=f_entries)
