"""Command-line interface: ``szasz-gbs <subcommand> [flags]``.

Every run starts its output with a ``#`` comment line holding all effective
parameters, so any table can be regenerated from its own output. CSV values
use 17 significant digits; summary lines use 6.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .errors import DomainError, InvalidParameters, ParseError, TruncationFailure, UnknownFunction
from .experiments import (
    DEFAULT_A,
    ProbeMode,
    run_bound_report,
    run_convergence_sweep,
    run_error_table,
    run_kantorovich_comparison,
    run_mfs_comparison,
)
from .funcparser import catalog, function_from_source
from .kernel import OperatorParams, Point2, Rect, TruncationPolicy
from .moduli import mixed_modulus, partial_modulus, total_modulus
from .moments import moment_report
from .operators import OperatorKind, QuadratureSpec, eval_gbs, evaluate

EXIT_OK, EXIT_USAGE, EXIT_EVAL = 0, 1, 2

DEFAULT_SEPARABLE = "exp(x) + cos(pi*y)"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- formatting ------------------------------------------------------------------


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def fmt6(v) -> str:
    return format(v, ".6g") if isinstance(v, float) else fmt(v)


class Output:
    """Header, rows and an optional summary, written as CSV or JSON."""

    def __init__(self, command: str, header: Dict[str, object], columns: Sequence[str]):
        self.command = command
        self.header = header
        self.columns = list(columns)
        self.rows: List[Sequence] = []
        self.summary: Dict[str, object] = {}

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            doc = {
                "command": self.command,
                "parameters": self.header,
                "rows": [dict(zip(self.columns, r)) for r in self.rows],
            }
            if self.summary:
                doc["summary"] = self.summary
            return json.dumps(doc, indent=2, allow_nan=True) + "\n"
        buf = io.StringIO()
        params = " ".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={fmt(v)}" for k, v in self.header.items())
        buf.write(f"# szasz-gbs {self.command} {params}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        if self.summary:
            buf.write("# " + " ".join(f"{k}={fmt6(v)}" for k, v in self.summary.items()) + "\n")
        return buf.getvalue()


# --- flag parsing ------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return v


def _m_list(text: str) -> List[int]:
    return [_positive_int(t) for t in text.split(",") if t.strip()]


def _rect(text: str) -> Rect:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected C,D, got {text!r}")
    try:
        return Rect(_finite(parts[0]), _finite(parts[1]))
    except InvalidParameters as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_function(p, required=True, default=None):
    g = p.add_mutually_exclusive_group(required=required and default is None)
    g.add_argument("--f", dest="source", help="expression in x and y, e.g. 'x*sin(pi*y)'")
    g.add_argument("--catalog", help="name of a catalog function")
    p.set_defaults(default_source=default)


def _add_params(p, single=True):
    if single:
        p.add_argument("--m", type=_positive_int, default=10)
        p.add_argument("--n", type=_positive_int, default=None, help="defaults to m")
    p.add_argument("--a", type=_finite, default=DEFAULT_A)


def _add_point(p):
    p.add_argument("--x", type=_finite, default=0.5)
    p.add_argument("--y", type=_finite, default=0.5)


def _add_policy(p):
    p.add_argument("--tail-tol", type=_finite, default=1e-12)


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: standard output)")


def _add_probe(p, default_list):
    p.add_argument("--m-list", type=_m_list, default=_m_list(default_list))
    p.add_argument("--probe", choices=("point", "grid-max", "grid-mean"), default="point")
    _add_point(p)
    p.add_argument("--rect", type=_rect, default=None, help="C,D for grid probes (default: function domain)")
    p.add_argument("--step", type=_finite, default=0.25)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="szasz-gbs", description="Base-a Szasz-Mirakjan operators and their Boolean sums.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one operator at one point")
    p.add_argument("--op", choices=[k.value for k in OperatorKind], default="bivariate")
    _add_function(p)
    _add_params(p)
    _add_point(p)
    p.add_argument("--quad-order", type=_positive_int, default=8)
    _add_policy(p)
    _add_output(p)

    p = sub.add_parser("moments", help="closed-form moments next to truncated sums")
    _add_params(p)
    _add_point(p)
    _add_policy(p)
    _add_output(p)

    p = sub.add_parser("gbs-check", help="separable exactness and first-moment annihilation of the Boolean sum")
    _add_function(p, default=DEFAULT_SEPARABLE)
    _add_params(p)
    _add_point(p)
    _add_policy(p)
    _add_output(p)

    for name, helptext in (("table", "errors of the operator and its Boolean sum along m = n"),
                           ("compare-mfs", "Boolean sums of the base-a and classical operators")):
        p = sub.add_parser(name, help=helptext)
        _add_function(p)
        _add_params(p, single=False)
        _add_probe(p, "10,15,25,50,100" if name == "table" else "10,20,50,100")
        _add_policy(p)
        _add_output(p)

    p = sub.add_parser("compare-kantorovich", help="operator against the Kantorovich variant on a grid")
    _add_function(p)
    _add_params(p)
    p.add_argument("--rect", type=_rect, default=None)
    p.add_argument("--step", type=_finite, default=0.1)
    p.add_argument("--quad-order", type=_positive_int, default=8)
    _add_policy(p)
    _add_output(p)

    p = sub.add_parser("sweep", help="empirical convergence orders")
    _add_function(p)
    _add_params(p, single=False)
    _add_probe(p, "10,20,40,80,160,320,640")
    _add_policy(p)
    _add_output(p)

    p = sub.add_parser("bounds", help="measured errors against the theoretical bounds")
    _add_function(p)
    _add_params(p, single=False)
    p.add_argument("--m-list", type=_m_list, default=_m_list("10,50,100"))
    p.add_argument("--rect", type=_rect, default=Rect(1.0, 1.0))
    p.add_argument("--step", type=_finite, default=0.25)
    _add_policy(p)
    _add_output(p)

    p = sub.add_parser("modulus", help="grid estimates of the moduli of continuity")
    _add_function(p)
    p.add_argument("--kind", choices=("total", "partial-x", "partial-y", "mixed"), default="total")
    p.add_argument("--delta", type=_finite, default=0.1)
    p.add_argument("--delta2", type=_finite, default=None, help="second delta for the mixed modulus")
    p.add_argument("--rect", type=_rect, default=None)
    p.add_argument("--step", type=_finite, default=None)
    _add_output(p)
    return parser


# --- subcommands -----------------------------------------------------------------


def _function(args):
    if getattr(args, "catalog", None):
        return catalog(args.catalog)
    return function_from_source(args.source or args.default_source)


def _fname(f) -> str:
    return f.source or f.name


def _params(args) -> OperatorParams:
    return OperatorParams(args.m, args.n if args.n is not None else args.m, args.a)


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(tail_tol=args.tail_tol)


def _domain(args, f) -> Rect:
    return args.rect or f.domain or Rect(1.0, 1.0)


def _probe(args, f) -> ProbeMode:
    if args.probe == "point":
        return ProbeMode.single_point(Point2(args.x, args.y))
    if not args.step > 0:
        raise InvalidParameters("--step must be positive")
    rect = _domain(args, f)
    return (ProbeMode.grid_max if args.probe == "grid-max" else ProbeMode.grid_mean)(rect, args.step)


def cmd_eval(args) -> Output:
    f, params, policy = _function(args), _params(args), _policy(args)
    point, quad = Point2(args.x, args.y), QuadratureSpec(args.quad_order)
    out = Output("eval", dict(op=args.op, f=_fname(f), m=params.m, n=params.n, a=params.a, x=point.x, y=point.y,
                              tail_tol=policy.tail_tol, quad_order=quad.order),
                 ("op", "m", "n", "a", "x", "y", "value"))
    value = evaluate(OperatorKind(args.op), f, params, point, policy, quad)
    out.rows.append((args.op, params.m, params.n, params.a, point.x, point.y, value))
    return out


def cmd_moments(args) -> Output:
    params, policy, point = _params(args), _policy(args), Point2(args.x, args.y)
    out = Output("moments", dict(m=params.m, n=params.n, a=params.a, x=point.x, y=point.y, tail_tol=policy.tail_tol),
                 ("i", "j", "centered", "closed_form", "numeric", "abs_diff", "rel_diff"))
    for r in moment_report(params, point, policy):
        out.rows.append((r.order.i, r.order.j, r.order.centered, r.closed_form, r.numeric, r.abs_diff, r.rel_diff))
    return out


def cmd_gbs_check(args) -> Output:
    f, params, policy, point = _function(args), _params(args), _policy(args), Point2(args.x, args.y)
    out = Output("gbs-check", dict(f=_fname(f), m=params.m, n=params.n, a=params.a, x=point.x, y=point.y,
                                   tail_tol=policy.tail_tol),
                 ("check", "value", "tolerance", "holds"))
    fv = f(point.x, point.y)
    err = abs(eval_gbs(f, params, point, policy) - fv)
    tol = 3 * policy.tail_tol * max(1.0, abs(fv))
    out.rows.append(("separable_error", err, tol, err <= tol))
    for axis, g in (("x", lambda t, s: t - point.x), ("y", lambda t, s: s - point.y)):
        v = abs(eval_gbs(g, params, point, policy))
        out.rows.append((f"first_moment_{axis}", v, policy.tail_tol, v <= policy.tail_tol))
    return out


def _probe_header(args, f, policy):
    probe = _probe(args, f)
    return probe, dict(f=_fname(f), a=args.a, m_list=";".join(map(str, args.m_list)), probe=probe.describe(),
                       tail_tol=policy.tail_tol)


def cmd_table(args) -> Output:
    f, policy = _function(args), _policy(args)
    probe, header = _probe_header(args, f, policy)
    out = Output("table", header, ("m", "n", "err_bivariate", "err_gbs"))
    for r in run_error_table(f, args.a, args.m_list, probe, policy):
        out.rows.append((r.m, r.n, r.err_bivariate, r.err_gbs))
    return out


def cmd_compare_mfs(args) -> Output:
    f, policy = _function(args), _policy(args)
    probe, header = _probe_header(args, f, policy)
    out = Output("compare-mfs", header, ("m", "n", "err_mfs_gbs", "err_gbs"))
    for r in run_mfs_comparison(f, args.a, args.m_list, probe, policy):
        out.rows.append((r.m, r.n, r.err_mfs_gbs, r.err_gbs))
    return out


def cmd_compare_kantorovich(args) -> Output:
    f, policy = _function(args), _policy(args)
    rect, quad = _domain(args, f), QuadratureSpec(args.quad_order)
    if not args.step > 0:
        raise InvalidParameters("--step must be positive")
    out = Output("compare-kantorovich",
                 dict(f=_fname(f), m=args.m, n=args.m, a=args.a, rect=f"{rect.c!r};{rect.d!r}", step=args.step,
                      quad_order=quad.order, tail_tol=policy.tail_tol),
                 ("x", "y", "f", "bivariate", "kantorovich", "err_bivariate", "err_kantorovich"))
    cmp = run_kantorovich_comparison(f, args.a, args.m, rect, args.step, quad, policy)
    eb, ek = cmp.err_bivariate, cmp.err_kantorovich
    for i, x in enumerate(cmp.xs):
        for j, y in enumerate(cmp.ys):
            out.rows.append((float(x), float(y), float(cmp.f_values[i, j]), float(cmp.bivariate[i, j]),
                             float(cmp.kantorovich[i, j]), float(eb[i, j]), float(ek[i, j])))
    out.summary = dict(mean_err_bivariate=cmp.mean_err_bivariate, mean_err_kantorovich=cmp.mean_err_kantorovich,
                       max_err_bivariate=cmp.max_err_bivariate, max_err_kantorovich=cmp.max_err_kantorovich)
    return out


def cmd_sweep(args) -> Output:
    f, policy = _function(args), _policy(args)
    probe, header = _probe_header(args, f, policy)
    out = Output("sweep", header, ("m", "n", "err_bivariate", "err_gbs"))
    res = run_convergence_sweep(f, args.a, args.m_list, probe, policy)
    for r in res.rows:
        out.rows.append((r.m, r.n, r.err_bivariate, r.err_gbs))
    out.summary = dict(slope_bivariate=res.slope_bivariate if res.slope_bivariate is not None else "nan",
                       slope_gbs=res.slope_gbs if res.slope_gbs is not None else "nan",
                       noise_floor=res.noise_floor)
    return out


def cmd_bounds(args) -> Output:
    f, policy = _function(args), _policy(args)
    if not args.step > 0:
        raise InvalidParameters("--step must be positive")
    out = Output("bounds", dict(f=_fname(f), a=args.a, m_list=";".join(map(str, args.m_list)),
                                rect=f"{args.rect.c!r};{args.rect.d!r}", step=args.step,
                                tail_tol=policy.tail_tol),
                 ("m", "n", "x", "y", "err", "bound_name", "bound_value", "holds"))
    report = run_bound_report(f, args.a, args.m_list, args.rect, policy, args.step)
    for r in report.rows:
        out.rows.append((r.m, r.n, r.x, r.y, r.err, r.bound_name, r.bound_value, r.holds))
    out.summary = dict(rows=len(report.rows), all_hold=report.all_hold)
    return out


def cmd_modulus(args) -> Output:
    f = _function(args)
    rect = _domain(args, f)
    if args.delta < 0 or (args.delta2 is not None and args.delta2 < 0):
        raise InvalidParameters("deltas must be nonnegative")
    if args.kind == "total":
        est = total_modulus(f, rect, args.delta, args.step)
    elif args.kind == "mixed":
        est = mixed_modulus(f, rect, args.delta, args.delta if args.delta2 is None else args.delta2, args.step)
    else:
        est = partial_modulus(f, rect, args.kind[-1], args.delta, args.step)
    out = Output("modulus", dict(f=_fname(f), kind=args.kind, rect=f"{rect.c!r};{rect.d!r}",
                                 delta=args.delta, delta2=args.delta2 if args.delta2 is not None else "none",
                                 step=args.step if args.step is not None else "auto"),
                 ("kind", "delta1", "delta2", "value", "grid_step", "is_lower_bound"))
    out.rows.append((est.kind, est.delta1, est.delta2, est.value, est.grid_step, est.is_lower_bound))
    return out


COMMANDS = {
    "eval": cmd_eval,
    "moments": cmd_moments,
    "gbs-check": cmd_gbs_check,
    "table": cmd_table,
    "compare-mfs": cmd_compare_mfs,
    "compare-kantorovich": cmd_compare_kantorovich,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "modulus": cmd_modulus,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        output = COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except InvalidParameters as exc:
        print(f"szasz-gbs: invalid parameters: {exc}", file=stderr)
        return EXIT_USAGE
    except (ParseError, UnknownFunction, DomainError, TruncationFailure) as exc:
        print(f"szasz-gbs: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_EVAL
    text = output.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
