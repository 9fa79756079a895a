"""Command-line front end.

The CLI is a thin client of the verification service: every subcommand builds
a request model and dispatches it either to the in-process handlers (default)
or to a remote instance over HTTP (``--server http://host:port``).  Payloads
are identical either way.

Exit codes: 0 all pass, 1 violation found, 2 usage/configuration error,
3 divergent or uncertified result.

Reports carry no timestamps, so re-running a command writes byte-identical
output.  The default output directory for relative ``--output`` paths can be
overridden with the FRACBOUND_OUTPUT_DIR environment variable.
"""

import argparse
import csv
import io
import json
import os
import sys

import httpx
from pydantic import ValidationError

from . import __version__
from .bounds import SLACK_TOL
from .errors import ConfigError, DivergentIntegralError, DomainError, HypothesisError
from .service import handlers, models

OUTPUT_DIR_ENV = "FRACBOUND_OUTPUT_DIR"

#: CSV schema of sweep reports; numbers use 17 significant digits.
SWEEP_CSV_HEADER = ["x", "alpha", "s", "p", "q", "theorem", "variant",
                    "lhs", "bound", "slack", "status"]

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_DIVERGENT = 3


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _float_list(text: str) -> list[float]:
    try:
        return [float(piece) for piece in text.split(",") if piece.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_LOCAL = {
    "/check-props": (handlers.handle_check_props, models.CheckPropsResponse),
    "/identity": (handlers.handle_identity, models.IdentityResponse),
    "/sweep": (handlers.handle_sweep, models.SweepResponse),
    "/tightness": (handlers.handle_tightness, models.TightnessResponse),
    "/compare-classical": (handlers.handle_compare_classical, models.CompareClassicalResponse),
    "/corollary": (handlers.handle_corollary, models.CorollaryResponse),
}


def _dispatch(args, path: str, request, transport=None):
    """Send one request to the service: in-process by default, over HTTP when
    --server is given."""
    if not getattr(args, "server", None):
        handler, _ = _LOCAL[path]
        return handler(request)
    _, response_cls = _LOCAL[path]
    with httpx.Client(base_url=args.server, timeout=600.0, transport=transport) as client:
        resp = client.post(path, json=request.model_dump(mode="json"))
        if resp.status_code == 422:
            detail = resp.json().get("detail", "invalid request")
            raise ConfigError(f"server rejected request: {detail}")
        resp.raise_for_status()
        return response_cls.model_validate(resp.json())


def _fetch_registry(args, transport=None) -> models.RegistryResponse:
    if not getattr(args, "server", None):
        return handlers.handle_registry()
    with httpx.Client(base_url=args.server, timeout=60.0, transport=transport) as client:
        resp = client.get("/registry")
        resp.raise_for_status()
        return models.RegistryResponse.model_validate(resp.json())


# ---------------------------------------------------------------------------
# report envelope and writers
# ---------------------------------------------------------------------------


def _envelope(command: str, request, results: list, summary: dict) -> dict:
    config = {"command": command}
    if request is not None:
        config.update(request.model_dump(mode="json"))
    return {
        "config": config,
        "results": [r.model_dump(mode="json") for r in results],
        "summary": summary,
    }


def _summary(status: str, violations: int, min_slack=None) -> dict:
    return {"pass": status == "pass", "violations": violations, "min_slack": min_slack}


def load_report(path: str) -> dict:
    """Re-read a JSON report and recompute its pass/fail status from the rows;
    raises ConfigError when the stored summary disagrees (corrupt report)."""
    with open(path, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    recomputed = _recompute_pass(report)
    stored = bool(report["summary"]["pass"])
    if recomputed is not None and recomputed != stored:
        raise ConfigError(
            f"report {path} is inconsistent: stored pass={stored}, rows say {recomputed}"
        )
    return report


def _recompute_pass(report: dict):
    """Derive pass/fail from per-row numbers where the command has rows."""
    command = report.get("config", {}).get("command")
    results = report.get("results", [])
    if command == "sweep":
        ok = True
        for res in results:
            if res.get("status") in ("divergent", "uncertified"):
                return False
            for row in res.get("reports", []):
                for key in ("slack_first", "slack_second"):
                    if row.get(key) is not None and row[key] < -SLACK_TOL:
                        ok = False
        return ok
    if command == "identity":
        tol = results[0]["tolerance"] if results else 0.0
        return all(row["residual"] <= tol for res in results for row in res.get("rows", []))
    if command == "corollary":
        return all(row["ok"] for res in results for row in res.get("rows", []))
    return None


def _resolve_output(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def _emit(text: str, output: str | None):
    output = _resolve_output(output)
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# per-command rendering
# ---------------------------------------------------------------------------


def _sweep_csv_rows(resp: models.SweepResponse) -> list:
    rows = []
    for rep in resp.reports:
        for variant, bound, slack in (("first", rep.bound_first, rep.slack_first),
                                      ("second", rep.bound_second, rep.slack_second)):
            if bound is None:
                continue
            status = "pass" if slack >= -SLACK_TOL else "fail"
            rows.append([_fmt(rep.x), _fmt(rep.alpha), _fmt(rep.s), _fmt(rep.p),
                         _fmt(rep.q), resp.theorem, variant, _fmt(rep.lhs),
                         _fmt(bound), _fmt(slack), status])
    return rows


def _flags_table(flags: dict) -> str:
    lines = ["hypothesis certification:"]
    for name, value in flags.items():
        lines.append(f"  {name:<28} {'certified' if value else 'NOT CERTIFIED'}")
    return "\n".join(lines)


def _render_sweep(resp: models.SweepResponse, fmt: str, request) -> tuple[str, int]:
    if resp.status in ("divergent", "uncertified"):
        code = EXIT_DIVERGENT
    elif resp.violations > 0:
        code = EXIT_VIOLATION
    else:
        code = EXIT_PASS
    if fmt == "json":
        env = _envelope("sweep", request, [resp],
                        _summary(resp.status, resp.violations, resp.min_slack))
        return json.dumps(env, indent=2) + "\n", code
    if fmt == "csv":
        return _csv_text(SWEEP_CSV_HEADER, _sweep_csv_rows(resp)), code
    lines = [
        f"sweep f={resp.function_name} h={resp.h_name} "
        f"theorem={resp.theorem} variant={resp.variant}",
        _flags_table(resp.hypothesis_flags),
        f"alphas={resp.alphas} x_count={resp.x_count}"
        + (f" ps={resp.ps}" if resp.ps else "") + (f" qs={resp.qs}" if resp.qs else ""),
    ]
    if resp.error:
        lines.append(f"error: {resp.error}")
    if resp.min_slack is not None:
        lines.append(f"min_slack={_fmt(resp.min_slack)} at x={_fmt(resp.argmin_x)}")
    lines.append(f"violations={resp.violations}")
    lines.append(f"status: {resp.status}")
    return "\n".join(lines) + "\n", code


def _render_identity(resp: models.IdentityResponse, fmt: str, request) -> tuple[str, int]:
    code = EXIT_PASS if resp.status == "pass" else EXIT_VIOLATION
    violations = sum(1 for row in resp.rows if row.residual > resp.tolerance)
    if fmt == "json":
        env = _envelope("identity", request, [resp], _summary(resp.status, violations))
        return json.dumps(env, indent=2) + "\n", code
    if fmt == "csv":
        rows = [[row.f, _fmt(row.alpha), _fmt(row.x), _fmt(row.residual),
                 "pass" if row.residual <= resp.tolerance else "fail"]
                for row in resp.rows]
        return _csv_text(["f", "alpha", "x", "residual", "status"], rows), code
    lines = [f"identity residual sweep ({len(resp.rows)} points)",
             f"max_residual={_fmt(resp.max_residual)} tolerance={_fmt(resp.tolerance)}",
             f"status: {resp.status}"]
    return "\n".join(lines) + "\n", code


def _render_tightness(resp: models.TightnessResponse, fmt: str, request) -> tuple[str, int]:
    code = EXIT_PASS if resp.status == "pass" else EXIT_VIOLATION
    if fmt == "json":
        env = _envelope("tightness", request, [resp],
                        _summary(resp.status, 0 if resp.status == "pass" else 1,
                                 resp.min_slack))
        return json.dumps(env, indent=2) + "\n", code
    if fmt == "csv":
        row = [[resp.function_name, resp.h_name, resp.theorem, resp.variant,
                _fmt(resp.alpha), _fmt(resp.p), _fmt(resp.q), _fmt(resp.x_star),
                _fmt(resp.min_slack), resp.status]]
        return _csv_text(["f", "h", "theorem", "variant", "alpha", "p", "q",
                          "x_star", "min_slack", "status"], row), code
    lines = [
        f"tightness f={resp.function_name} h={resp.h_name} "
        f"theorem={resp.theorem} variant={resp.variant} alpha={_fmt(resp.alpha)}",
        f"x_star={_fmt(resp.x_star)} min_slack={_fmt(resp.min_slack)} "
        f"(coarse {_fmt(resp.coarse_min_slack)}, {resp.evaluations} evaluations)",
        f"status: {resp.status}",
    ]
    return "\n".join(lines) + "\n", code


def _render_compare(resp: models.CompareClassicalResponse, fmt: str, request) -> tuple[str, int]:
    if fmt == "json":
        env = _envelope("compare-classical", request, [resp], _summary("pass", 0))
        return json.dumps(env, indent=2) + "\n", EXIT_PASS
    if fmt == "csv":
        row = [[resp.h_name, _fmt(resp.thm1_factor), _fmt(resp.thm1_better),
                _fmt(resp.p), _fmt(resp.thm2_lhs_factor),
                _fmt(resp.thm2_threshold), _fmt(resp.thm2_better)]]
        return _csv_text(["h", "thm1_factor", "thm1_better", "p",
                          "thm2_lhs_factor", "thm2_threshold", "thm2_better"], row), EXIT_PASS
    lines = [f"compare-classical h={resp.h_name}",
             f"family-1 factor = {_fmt(resp.thm1_factor)} "
             f"(better than classical iff < 0.5): {resp.thm1_better}"]
    if resp.p is not None:
        lines.append(
            f"family-2 factor = {_fmt(resp.thm2_lhs_factor)} vs threshold "
            f"{_fmt(resp.thm2_threshold)} (p={_fmt(resp.p)}): {resp.thm2_better}"
        )
    return "\n".join(lines) + "\n", EXIT_PASS


def _render_corollary(resp: models.CorollaryResponse, fmt: str, request) -> tuple[str, int]:
    violations = sum(1 for row in resp.rows if not row.ok)
    code = EXIT_PASS if resp.status == "pass" else EXIT_VIOLATION
    if fmt == "json":
        env = _envelope("corollary", request, [resp], _summary(resp.status, violations))
        return json.dumps(env, indent=2) + "\n", code
    if fmt == "csv":
        rows = [[row.theorem, row.variant, _fmt(row.s), _fmt(row.alpha),
                 _fmt(row.p), _fmt(row.q), _fmt(row.closed_form),
                 _fmt(row.quadrature), _fmt(row.rel_err),
                 "pass" if row.ok else "fail"] for row in resp.rows]
        return _csv_text(["theorem", "variant", "s", "alpha", "p", "q",
                          "closed_form", "quadrature", "rel_err", "status"], rows), code
    lines = [f"closed-form cross-check ({len(resp.rows)} cases)",
             f"max_rel_err={_fmt(resp.max_rel_err)} tolerance={_fmt(resp.tolerance)}",
             f"status: {resp.status}"]
    return "\n".join(lines) + "\n", code


def _render_check_props(resp: models.CheckPropsResponse, fmt: str, request) -> tuple[str, int]:
    code = EXIT_PASS if resp.status == "pass" else EXIT_VIOLATION
    if fmt == "json":
        env = _envelope("check-props", request, [resp],
                        _summary(resp.status, 0 if resp.consistent else 1))
        return json.dumps(env, indent=2) + "\n", code
    if fmt == "csv":
        rows = [[resp.target, name, _fmt(resp.claims.get(name)),
                 _fmt(rep.holds), _fmt(rep.worst_violation)]
                for name, rep in resp.checks.items()]
        return _csv_text(["target", "property", "claimed", "holds", "worst_violation"],
                         rows), code
    lines = [f"check-props {resp.kind}={resp.target}"]
    for name, rep in resp.checks.items():
        claimed = resp.claims.get(name)
        claim_text = "-" if claimed is None else ("claimed" if claimed else "not claimed")
        lines.append(
            f"  {name:<44} {claim_text:<12} -> {'holds' if rep.holds else 'does not hold'} "
            f"(worst {_fmt(rep.worst_violation)})"
        )
    lines.append(f"status: {resp.status}")
    return "\n".join(lines) + "\n", code


def _render_registry(resp: models.RegistryResponse, fmt: str) -> tuple[str, int]:
    if fmt == "json":
        env = _envelope("list", None, [resp], _summary("pass", 0))
        return json.dumps(env, indent=2) + "\n", EXIT_PASS
    if fmt == "csv":
        rows = [["h", e.name, " ".join(e.parameters), e.description] for e in resp.h_functions]
        rows += [["f", e.name, " ".join(e.parameters), e.description] for e in resp.f_functions]
        return _csv_text(["kind", "name", "parameters", "description"], rows), EXIT_PASS
    lines = ["weight functions (h):"]
    for entry in resp.h_functions:
        claims = ", ".join(k for k, v in entry.claims.items() if v) or "none"
        lines.append(f"  {entry.name:<18} {entry.description}")
        lines.append(f"  {'':<18} claims: {claims}")
    lines.append("test functions (f):")
    for entry in resp.f_functions:
        lines.append(f"  {entry.name:<18} {entry.description}")
    return "\n".join(lines) + "\n", EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sub.add_argument("--output", default=None,
                     help=f"write the report to this path (relative paths join "
                          f"${OUTPUT_DIR_ENV} when set)")
    sub.add_argument("--server", default=None,
                     help="dispatch to a running fracbound service instead of in-process")
    sub.add_argument("--abs-tol", type=float, default=1e-10)
    sub.add_argument("--rel-tol", type=float, default=1e-10)
    sub.add_argument("--max-subdivisions", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracbound",
        description="verify Ostrowski-type fractional-integral bounds for "
                    "h-convex derivative classes",
    )
    parser.add_argument("--version", action="version", version=f"fracbound {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("list", help="show the function registries")
    _add_common(sub)

    sub = subs.add_parser("check-props", help="run the property checkers for an h or f")
    _add_common(sub)
    sub.add_argument("--h", dest="h_spec", default=None, help='e.g. "power:s=0.5"')
    sub.add_argument("--f", dest="f_spec", default=None, help='e.g. "square:a=0,b=1"')
    sub.add_argument("--q", type=float, default=1.0,
                     help="exponent for the |f'|^q class check (with --f and --h)")
    sub.add_argument("--grid", type=int, default=101, help="points per grid axis")

    sub = subs.add_parser("identity", help="residual sweep of the generating identity")
    _add_common(sub)
    sub.add_argument("--f", dest="f_specs", action="append", required=True,
                     help="test function spec; repeatable")
    sub.add_argument("--alpha", type=_float_list, default=[0.5, 1.0, 1.5, 2.0])
    sub.add_argument("--grid", type=int, default=21, help="interior x points")

    sub = subs.add_parser("sweep", help="verify one bound family over a grid")
    _add_common(sub)
    sub.add_argument("--f", dest="f_spec", required=True)
    sub.add_argument("--h", dest="h_spec", required=True)
    sub.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    sub.add_argument("--variant", choices=("first", "second", "both"), default="first")
    sub.add_argument("--alpha", type=_float_list, default=[0.5, 1.0, 1.5, 2.0])
    sub.add_argument("--grid", type=int, default=101, help="x points")
    sub.add_argument("--p", type=_float_list, default=[],
                     help="Holder exponents (family 2)")
    sub.add_argument("--q", type=_float_list, default=[],
                     help="mean exponents (family 3)")

    sub = subs.add_parser("tightness", help="minimize slack over x")
    _add_common(sub)
    sub.add_argument("--f", dest="f_spec", required=True)
    sub.add_argument("--h", dest="h_spec", required=True)
    sub.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    sub.add_argument("--variant", choices=("first", "second", "both"), default="first")
    sub.add_argument("--alpha", type=float, default=1.0)
    sub.add_argument("--p", type=float, default=None)
    sub.add_argument("--q", type=float, default=None)

    sub = subs.add_parser("compare-classical", help="evaluate the classical thresholds")
    _add_common(sub)
    sub.add_argument("--h", dest="h_spec", required=True)
    sub.add_argument("--p", type=float, default=None)

    sub = subs.add_parser("corollary", help="closed form vs quadrature cross-check")
    _add_common(sub)
    sub.add_argument("--theorem", type=int, choices=(1, 2, 3), action="append",
                     default=None, help="repeatable; default all")
    sub.add_argument("--s", type=_float_list, default=[0.25, 0.5, 0.75, 1.0])
    sub.add_argument("--alpha", type=_float_list, default=[0.5, 1.0, 2.0])
    sub.add_argument("--p", type=float, default=2.0)
    sub.add_argument("--q", type=float, default=2.0)
    sub.add_argument("--M", type=float, default=1.0)
    sub.add_argument("--a", type=float, default=0.0)
    sub.add_argument("--b", type=float, default=1.0)
    sub.add_argument("--x", type=float, default=0.5)

    sub = subs.add_parser("serve", help="run the HTTP service")
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument("--port", type=int, default=8000)

    return parser


def _quad_overrides(args) -> models.QuadratureOverrides:
    return models.QuadratureOverrides(
        abs_tol=args.abs_tol, rel_tol=args.rel_tol,
        max_subdivisions=args.max_subdivisions,
    )


def _run_command(args, transport=None) -> int:
    if args.command == "serve":
        import uvicorn

        from .service.app import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_PASS

    if args.command == "list":
        resp = _fetch_registry(args, transport)
        text, code = _render_registry(resp, args.format)
        _emit(text, args.output)
        return code

    if args.command == "check-props":
        request = models.CheckPropsRequest(h=args.h_spec, f=args.f_spec,
                                           q=args.q, grid_n=args.grid)
        resp = _dispatch(args, "/check-props", request, transport)
        text, code = _render_check_props(resp, args.format, request)
    elif args.command == "identity":
        request = models.IdentityRequest(f=args.f_specs, alphas=args.alpha,
                                         x_count=args.grid,
                                         quadrature=_quad_overrides(args))
        resp = _dispatch(args, "/identity", request, transport)
        text, code = _render_identity(resp, args.format, request)
    elif args.command == "sweep":
        request = models.SweepRequest(
            f=args.f_spec, h=args.h_spec, theorem=args.theorem,
            variant=args.variant, alphas=args.alpha, x_count=args.grid,
            ps=args.p, qs=args.q, quadrature=_quad_overrides(args),
        )
        resp = _dispatch(args, "/sweep", request, transport)
        text, code = _render_sweep(resp, args.format, request)
    elif args.command == "tightness":
        request = models.TightnessRequest(
            f=args.f_spec, h=args.h_spec, theorem=args.theorem,
            variant=args.variant, alpha=args.alpha, p=args.p, q=args.q,
            quadrature=_quad_overrides(args),
        )
        resp = _dispatch(args, "/tightness", request, transport)
        text, code = _render_tightness(resp, args.format, request)
    elif args.command == "compare-classical":
        request = models.CompareClassicalRequest(h=args.h_spec, p=args.p,
                                                 quadrature=_quad_overrides(args))
        resp = _dispatch(args, "/compare-classical", request, transport)
        text, code = _render_compare(resp, args.format, request)
    elif args.command == "corollary":
        request = models.CorollaryRequest(
            theorems=args.theorem or [1, 2, 3], s_values=args.s,
            alphas=args.alpha, p=args.p, q=args.q, M=args.M,
            a=args.a, b=args.b, x=args.x, quadrature=_quad_overrides(args),
        )
        resp = _dispatch(args, "/corollary", request, transport)
        text, code = _render_corollary(resp, args.format, request)
    else:  # pragma: no cover - argparse enforces the choices
        raise ConfigError(f"unknown command {args.command!r}")

    _emit(text, args.output)
    return code


def main(argv=None, transport=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code in (0, None) else EXIT_USAGE
    try:
        return _run_command(args, transport)
    except (ConfigError, DomainError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisError as exc:
        print(f"uncertified: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except DivergentIntegralError as exc:
        print(f"divergent: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except httpx.HTTPError as exc:
        print(f"server error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
