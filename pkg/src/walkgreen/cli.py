"""Command-line interface: evaluate, tabulate, and cross-check Green's functions.

Exit codes: 0 success, 2 usage error, 3 domain/transience error,
4 convergence/consistency error, 5 check-suite failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass

from . import checks
from .domains import STRIP, DomainSpec
from .errors import (
    CapabilityError,
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    TransienceError,
    WalkGreenError,
)
from .lattice import GreenEstimate, QuadratureConfig, green_full_origin
from .reflections import DEFAULT_STRIP_TOL, green

#: Environment variable overriding the default evaluation tolerance.
TOL_ENV_VAR = "WALKGREEN_TOL"

_MAX_TABLE_POINTS = 10_000


@dataclass(frozen=True)
class OutputRecord:
    """One evaluation: domain, points, value, error descriptor, timing."""

    domain: str
    x: tuple
    y: tuple
    value: float
    error_kind: str
    error_bound: float
    method: str
    wall_time_s: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "domain": self.domain,
                "x": list(self.x),
                "y": list(self.y),
                "value": self.value,
                "error": {"kind": self.error_kind, "bound": self.error_bound},
                "method": self.method,
                "wall_time_s": self.wall_time_s,
            }
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["domain", "x", "y", "value", "error_kind", "error_bound", "method", "wall_time_s"])
        writer.writerow(
            [
                self.domain,
                ",".join(map(str, self.x)),
                ",".join(map(str, self.y)),
                repr(self.value),
                self.error_kind,
                repr(self.error_bound),
                self.method,
                repr(self.wall_time_s),
            ]
        )
        return buf.getvalue()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkgreen",
        description="Green's functions of transient lattice walks on Z^d, half-spaces, orthants and strips.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_domain_args(p):
        p.add_argument("--domain", required=True, choices=["full", "half", "subspace", "orthant", "strip"])
        p.add_argument("--d", required=True, type=int, help="lattice dimension")
        p.add_argument("--m", type=int, help="number of constrained coordinates (subspace)")
        p.add_argument("--L", type=int, help="strip width")
        p.add_argument("--tol", type=float, default=None, help=f"evaluation tolerance (default from ${TOL_ENV_VAR} or built-in)")

    p_eval = sub.add_parser("eval", help="evaluate G(x, y) for one pair of points")
    add_domain_args(p_eval)
    p_eval.add_argument("--x", required=True, help="comma-separated integer coordinates")
    p_eval.add_argument("--y", required=True, help="comma-separated integer coordinates")
    p_eval.add_argument("--format", choices=["json", "csv"], default="json")

    p_table = sub.add_parser("table", help="tabulate diagonal/off-diagonal values along an axis")
    add_domain_args(p_table)
    p_table.add_argument("--range", required=True, help="inclusive index range A:B")
    p_table.add_argument("--out", required=True, help="output file path")
    p_table.add_argument("--format", choices=["csv", "json"], default="csv")
    p_table.add_argument("--plot", action="store_true", help="render a PNG figure next to the output file")

    p_check = sub.add_parser("check", help="run a cross-check suite")
    p_check.add_argument("suite", choices=sorted(checks.SUITES))
    p_check.add_argument("--walks", type=int, default=100_000)
    p_check.add_argument("--horizon", type=int, default=4000)
    p_check.add_argument("--seed", type=int, default=20_260_809)
    p_check.add_argument("--dump-graphs", metavar="DIR",
                         help="with the network suite: write the verified truncations as edge lists")
    return parser


def _parse_point(parser, text: str, d: int) -> tuple:
    try:
        pt = tuple(int(part) for part in text.split(","))
    except ValueError:
        parser.error(f"malformed coordinates {text!r}: expected comma-separated integers")
    if len(pt) != d:
        parser.error(f"coordinates {text!r} have dimension {len(pt)}, expected --d {d}")
    return pt


def _parse_range(parser, text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        parser.error(f"malformed range {text!r}: expected A:B")


def _domain_spec(args) -> DomainSpec:
    if args.domain == "full":
        return DomainSpec.full(args.d)
    if args.domain == "half":
        return DomainSpec.half(args.d)
    if args.domain == "orthant":
        return DomainSpec.orthant(args.d)
    if args.domain == "subspace":
        if args.m is None:
            raise ConfigError("--domain subspace requires --m")
        return DomainSpec.subspace(args.d, args.m)
    if args.L is None:
        raise ConfigError("--domain strip requires --L")
    return DomainSpec.strip(args.d, args.L)


def _tolerances(args, domain: DomainSpec) -> tuple[QuadratureConfig, float]:
    tol = args.tol
    if tol is None and os.environ.get(TOL_ENV_VAR):
        tol = float(os.environ[TOL_ENV_VAR])
    if domain.kind == STRIP:
        return QuadratureConfig(), (tol if tol is not None else DEFAULT_STRIP_TOL)
    cfg = QuadratureConfig(abs_tol=tol) if tol is not None else QuadratureConfig()
    return cfg, DEFAULT_STRIP_TOL


def _method_tag(domain: DomainSpec) -> str:
    if domain.kind == STRIP:
        return "reflected-series"
    return "montroll-quadrature" if domain.m == 0 else "reflection-sum"


def _estimate_record(domain: DomainSpec, x, y, est: GreenEstimate, seconds: float) -> OutputRecord:
    return OutputRecord(
        domain=domain.label,
        x=tuple(x),
        y=tuple(y),
        value=est.value,
        error_kind=est.kind,
        error_bound=est.error_bound,
        method=_method_tag(domain),
        wall_time_s=seconds,
    )


def _cmd_eval(parser, args) -> int:
    domain = _domain_spec(args)
    x = _parse_point(parser, args.x, args.d)
    y = _parse_point(parser, args.y, args.d)
    cfg, strip_tol = _tolerances(args, domain)
    start = time.perf_counter()
    est = green(domain, x, y, cfg, strip_tol)
    record = _estimate_record(domain, x, y, est, time.perf_counter() - start)
    print(record.to_json() if args.format == "json" else record.to_csv(), end="" if args.format == "csv" else "\n")
    return 0


def _table_rows(domain: DomainSpec, lo: int, hi: int, cfg, strip_tol) -> tuple[str, list[dict]]:
    d = domain.d
    rows = []
    if domain.kind == STRIP:
        index = "x2"
        for t in range(lo, hi + 1):
            row = {index: t}
            for a in range(domain.L):
                pt = (a, t) + (0,) * (d - 2)
                est = green(domain, pt, pt, cfg, strip_tol)
                row[f"diag_x1={a}_value"] = est.value
                row[f"diag_x1={a}_error"] = est.error_bound
            rows.append(row)
        return index, rows
    index = "x1"
    origin = (0,) * d
    for t in range(lo, hi + 1):
        pt = (t,) + (0,) * (d - 1)
        diag = green(domain, pt, pt, cfg, strip_tol)
        off = green(domain, origin, pt, cfg, strip_tol)
        rows.append(
            {
                index: t,
                "diag_value": diag.value,
                "diag_error": diag.error_bound,
                "offdiag_value": off.value,
                "offdiag_error": off.error_bound,
            }
        )
    return index, rows


def _cmd_table(parser, args) -> int:
    domain = _domain_spec(args)
    lo, hi = _parse_range(parser, args.range)
    if hi - lo + 1 > _MAX_TABLE_POINTS:
        parser.error(f"range spans {hi - lo + 1} points; limit is {_MAX_TABLE_POINTS}")
    cfg, strip_tol = _tolerances(args, domain)
    index, rows = _table_rows(domain, lo, hi, cfg, strip_tol)
    if domain.kind == STRIP:
        columns = [index] + [f"diag_x1={a}_{kind}" for a in range(domain.L) for kind in ("value", "error")]
    else:
        columns = [index, "diag_value", "diag_error", "offdiag_value", "offdiag_error"]
    table = {"domain": domain.label, "index": index, "rows": rows}

    try:
        if args.format == "json":
            with open(args.out, "w", encoding="ascii") as fh:
                json.dump(table, fh, indent=2)
                fh.write("\n")
        else:
            with open(args.out, "w", encoding="ascii", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(columns)
                for row in rows:
                    writer.writerow([row[index]] + [repr(row[c]) for c in columns[1:]])
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1

    if args.plot:
        from .plotting import render_table_figure

        reference = green_full_origin(domain.d, (0,) * domain.d, QuadratureConfig()).value
        fig_path = os.path.splitext(args.out)[0] + ".png"
        render_table_figure(table, fig_path, reference=reference)
        print(f"wrote {args.out} and {fig_path}")
    else:
        print(f"wrote {args.out}")
    return 0


def _cmd_check(args) -> int:
    kwargs = {}
    if args.suite == "mc":
        kwargs = {"walks": args.walks, "horizon": args.horizon, "seed": args.seed}
    results = checks.run_suite(args.suite, **kwargs)
    for result in results:
        print(result.line())
    if args.suite == "network" and args.dump_graphs:
        for path in checks.dump_network_graphs(args.dump_graphs):
            print(f"wrote {path}")
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 5


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(parser, args)
        if args.command == "table":
            return _cmd_table(parser, args)
        return _cmd_check(args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (TransienceError, DomainError, CapabilityError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, ConsistencyError) as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 4
    except WalkGreenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
