"""Command-line entry point: ``fixfig <subcommand> ...``.

Exit codes: 0 on success or pass, 1 when a check fails, 2 on usage or
parse errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import io
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

from fixfig.demo import EllipseDemoConfig, QuadrantPolicy, demo_ellipse
from fixfig.document import THEOREMS, DocumentError, SpaceDocument, VerifyRequest, load_document
from fixfig.expr import ExpressionError
from fixfig.geometry import Figure, KindError, Shape
from fixfig.oracle.catalog import certify_gap
from fixfig.oracle.scan import MAP_POLICIES, ScanConfig, soundness_scan
from fixfig.render import Format, analysis_report, render_report
from fixfig.simfunc import DEFAULT_ZETA_POOL, SimFunc, check_zeta2, default_grid, parse_zeta_spec
from fixfig.spaces import Kind, ParameterError, StructuralError, validate_b_metric, validate_metric, validate_s_metric
from fixfig.verifiers import (
    DEFAULT_A_SWEEP,
    check_ze_contraction,
    verify_closed_ellipse,
    verify_fixed_circle,
    verify_fixed_disc,
    verify_fixed_ellipse,
    verify_identity_characterization,
    verify_phi_circle,
    verify_uniqueness,
)

__all__ = ["CommandResult", "build_parser", "run_command", "main"]

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if message:
            raise UsageError(message.strip())
        raise _HelpExit(status)


class _HelpExit(Exception):
    def __init__(self, status):
        super().__init__(status)
        self.status = status


@dataclass
class CommandResult:
    code: int
    out: str
    err: str


def _rational_arg(text: str) -> Fraction:
    if not _RATIONAL.match(text.strip()):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}") from None


def _zeta_arg(text: str) -> SimFunc:
    try:
        return parse_zeta_spec(text)
    except (ParameterError, ExpressionError, ArithmeticError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pair_arg(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected two comma-separated points, got {text!r}")
    return parts[0], parts[1]


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--format", choices=[f.value for f in Format], **({"default": "text"} if not suppress else kw))
    parser.add_argument("--a", type=_rational_arg, help="pin the a-sweep to one value", **kw)
    parser.add_argument("--zeta", type=_zeta_arg, help="family:param or expr:<expression>", **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fixfig", description="Fixed circles, discs and ellipses of self-maps on finite spaces.")
    _global_options(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("validate", parents=[common], help="check the space axioms and the zeta")
    p.add_argument("document")

    p = sub.add_parser("analyze", parents=[common], help="Fix(f), rho/mu, fixed figures and the gap report")
    p.add_argument("document")

    p = sub.add_parser("verify", parents=[common], help="check a theorem's hypotheses on the document")
    p.add_argument("document")
    p.add_argument("--theorem", choices=THEOREMS)
    p.add_argument("--foci", type=_pair_arg)
    p.add_argument("--center")
    p.add_argument("--radius", type=_rational_arg)
    p.add_argument("--shape", choices=[s.value for s in Shape], help="figure shape for the uniqueness theorem")

    p = sub.add_parser("scan", parents=[common], help="seeded randomized soundness scan")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--kinds", default="metric,s-metric,b-metric")
    p.add_argument("--map-policy", choices=MAP_POLICIES, default="mixed")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("demo-ellipse", parents=[common], help="numerical fixed-circle demo in the plane")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--quadrant-policy", choices=[q.value for q in QuadrantPolicy], default="piecewise")
    return parser


def _a_values(args, request_a=None):
    if getattr(args, "a", None) is not None:
        return (args.a,)
    if request_a is not None:
        return (request_a,)
    return DEFAULT_A_SWEEP


def _index(space, label, what):
    try:
        return space.index(label)
    except KeyError:
        raise UsageError(f"{what} {label!r} is not a point of the space") from None


def _cmd_validate(args, doc: SpaceDocument):
    sp = doc.space
    if sp.kind is Kind.METRIC:
        res = validate_metric(sp.table)
    elif sp.kind is Kind.S_METRIC:
        res = validate_s_metric(sp.table)
    else:
        res = validate_b_metric(sp.table, sp.b)
    reports = [res]
    ok = bool(res)
    zeta = getattr(args, "zeta", None) or doc.zeta
    if zeta is not None:
        z2 = check_zeta2(zeta, default_grid(sp))
        reports.append({"zeta": zeta.spec(), "z2": "pass" if z2.passed else "fail", "note": z2.note})
        ok = ok and z2.passed
    return reports, ok


def _cmd_analyze(args, doc: SpaceDocument):
    pool = list(DEFAULT_ZETA_POOL)
    for extra in (doc.zeta, getattr(args, "zeta", None)):
        if extra is not None and extra not in pool:
            pool.append(extra)
    gap = certify_gap(doc.space, doc.f, pool, _a_values(args))
    return analysis_report(gap), True


def _request_from_args(args) -> VerifyRequest:
    return VerifyRequest(
        args.theorem,
        foci=args.foci,
        center=args.center,
        r=args.radius,
        shape=Shape(args.shape) if args.shape else None,
    )


def _run_request(args, doc: SpaceDocument, req: VerifyRequest):
    sp, f = doc.space, doc.f
    zeta = getattr(args, "zeta", None) or req.zeta or doc.zeta
    if zeta is None:
        raise UsageError("no zeta given: use --zeta or a [zeta] section")
    t = req.theorem

    def need(value, what):
        if value is None:
            raise UsageError(f"theorem {t} needs {what}")
        return value

    if t in ("ellipse", "closed-ellipse", "ze-contraction") or (t == "uniqueness" and req.shape and req.shape.two_foci):
        x1, x2 = (_index(sp, p, "focus") for p in need(req.foci, "--foci"))
    if t in ("circle", "disc", "phi-circle") or (t == "uniqueness" and req.shape and not req.shape.two_foci):
        x0 = _index(sp, need(req.center, "--center"), "center")
    if t == "ellipse":
        return [verify_fixed_ellipse(sp, f, zeta, a, x1, x2) for a in _a_values(args, req.a)]
    if t == "circle":
        return [verify_fixed_circle(sp, f, zeta, a, x0) for a in _a_values(args, req.a)]
    if t == "disc":
        return [verify_fixed_disc(sp, f, zeta, a, x0) for a in _a_values(args, req.a)]
    if t == "closed-ellipse":
        return [verify_closed_ellipse(sp, f, zeta, x1, x2)]
    if t == "ze-contraction":
        return [check_ze_contraction(sp, f, zeta, x1, x2)]
    if t == "phi-circle":
        return [verify_phi_circle(sp, f, zeta, need(req.r, "--radius"), x0)]
    if t == "uniqueness":
        shape = need(req.shape, "--shape")
        pts = (x1, x2) if shape.two_foci else (x0,)
        fig = Figure(shape, pts, need(req.r, "--radius"), sp.kind)
        return [verify_uniqueness(sp, f, fig, zeta, a) for a in _a_values(args, req.a)]
    if t == "identity":
        return [verify_identity_characterization(sp, f, zeta, req.r if req.r is not None else 0)]
    raise UsageError(f"unknown theorem {t!r}")


def _cmd_verify(args, doc: SpaceDocument):
    if args.theorem:
        requests = [_request_from_args(args)]
    else:
        if any(v is not None for v in (args.foci, args.center, args.radius, args.shape)):
            raise UsageError("--foci/--center/--radius/--shape need --theorem")
        requests = list(doc.requests)
        if not requests:
            raise UsageError("the document has no [verify] section; pass --theorem")
    reports = [rep for req in requests for rep in _run_request(args, doc, req)]
    ok = all(rep.status in ("pass", "vacuous") and (rep.conclusion is None or rep.conclusion.oracle_confirmed)
             for rep in reports)
    return (reports[0] if len(reports) == 1 else reports), ok


def _cmd_scan(args):
    try:
        kinds = tuple(Kind(k.strip()) for k in args.kinds.split(","))
    except ValueError:
        raise UsageError(f"unknown kind in --kinds {args.kinds!r}") from None
    kw = {}
    if getattr(args, "zeta", None) is not None:
        kw["zeta_pool"] = (args.zeta,)
    if getattr(args, "a", None) is not None:
        kw["a_values"] = (args.a,)
    config = ScanConfig(seed=args.seed, instances=args.instances, min_n=args.min_n, max_n=args.max_n,
                        kinds=kinds, map_policy=args.map_policy, workers=args.workers, **kw)
    rep = soundness_scan(config)
    ok = rep.soundness_violations == 0 and not rep.equivalence_mismatches and not rep.catalog_mismatches
    return rep, ok


def _cmd_demo(args):
    rep = demo_ellipse(EllipseDemoConfig(args.samples, args.eps, args.quadrant_policy))
    return rep.as_dict(), rep.passed


def _render_demo(data: dict, fmt: str) -> str:
    if fmt == "json":
        return render_report(data, fmt)
    lines = [
        f"demo-ellipse: N = {data['n']}, eps = {data['eps']}, policy = {data['quadrant_policy']}: {data['status'].upper()}",
        f"  max ||g(z) - z|| on the figure: {data['max_deviation']:.3e}",
        f"  denominator vs 4x^2 + 144y^2, max relative error: {data['max_identity_relative_error']:.3e}",
        f"  denominator vs 36, max relative error: {data['max_denominator_minus_36_relative_error']:.3e}",
        f"  probe z = {data['probe'][0]} + {data['probe'][1]}i -> g(z) = {data['probe_image'][0]} + "
        f"{data['probe_image'][1]}i, ||g(z) - z|| = {data['probe_deviation']:.6g}",
    ]
    return "\n".join(lines) + "\n"


def _dispatch(args, out: TextIO) -> int:
    fmt = args.format
    if args.command == "scan":
        rep, ok = _cmd_scan(args)
        out.write(render_report(rep, fmt))
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    if args.command == "demo-ellipse":
        data, ok = _cmd_demo(args)
        out.write(_render_demo(data, fmt))
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    doc = load_document(args.document)
    handler = {"validate": _cmd_validate, "analyze": _cmd_analyze, "verify": _cmd_verify}[args.command]
    rep, ok = handler(args, doc)
    out.write(render_report(rep, fmt))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


_VALUE_OPTIONS = ("--foci", "--center", "--radius", "--a", "--zeta")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--foci -1,1`` into ``--foci=-1,1`` so argparse keeps the value."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
            else:
                out += [tok, nxt]
        else:
            out.append(tok)
    return out


def run_command(argv: Sequence[str]) -> CommandResult:
    """Run one invocation and capture its exit code, stdout and stderr."""
    out, err = io.StringIO(), io.StringIO()
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
        code = _dispatch(args, out)
    except _HelpExit as exc:
        out.write(parser.format_help())
        code = exc.status
    except UsageError as exc:
        err.write(f"fixfig: error: {exc}\n")
        code = EXIT_USAGE
    except DocumentError as exc:
        if exc.invalid_space is not None:
            out.write(render_report(exc.invalid_space.result, getattr(args, "format", "text")))
            err.write(f"fixfig: invalid space: {exc}\n")
            code = EXIT_CHECK_FAILED
        else:
            err.write(f"fixfig: parse error: {exc}\n")
            code = EXIT_USAGE
    except OSError as exc:
        err.write(f"fixfig: cannot read input: {exc}\n")
        code = EXIT_USAGE
    except (ParameterError, StructuralError, KindError, KeyError, ValueError, TypeError) as exc:
        err.write(f"fixfig: error: {exc}\n")
        code = EXIT_USAGE
    return CommandResult(code, out.getvalue(), err.getvalue())


def main(argv: Sequence[str] | None = None) -> int:
    res = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.out)
    sys.stderr.write(res.err)
    return res.code


if __name__ == "__main__":
    raise SystemExit(main())
