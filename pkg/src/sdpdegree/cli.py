"""Command-line interface: ``sdpdegree {degree,table,ranks,solve,check}``.

Exit codes: 0 success, 2 cross-check failure, 3 numerical failure,
64 usage error, 65 unreadable instance file.  In json output every degree
value is a decimal string so that no consumer truncates it; indices and
counts stay plain numbers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .checks import run_checks
from .degree import CrossCheckError, DegreeResult, delta, table
from .experiment import (
    PUBLISHED_RANKS,
    ExperimentConfig,
    compare_to_published,
    histograms_to_csv,
    histograms_to_json,
    rank_distribution,
    reproduce_rank_table,
)
from .sdp import InstanceFormatError, SolveStatus, load_instance, solve_sdp

EXIT_OK = 0
EXIT_CROSS_CHECK = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65

SEED_ENV = "SDPDEGREE_SEED"
FORMATS = ("human", "json", "csv")


class UsageError(Exception):
    def __init__(self, message: str, reported: bool = False):
        super().__init__(message)
        self.reported = reported


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message, reported=True)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _degree_dict(res: DegreeResult) -> dict:
    return {
        "m": res.m,
        "n": res.n,
        "r": res.r,
        "value": str(res.value),
        "method": res.method,
        "pataki_ok": res.pataki_ok,
        "conjectural": res.conjectural,
        "cross_checks": [{"route": name, "value": str(v)} for name, v in res.cross_checks],
    }


def _report_mismatch(exc: CrossCheckError) -> int:
    m, n, r = exc.query
    routes = ", ".join(f"{name}={v}" for name, v in exc.routes)
    print(f"cross-check mismatch at (m,n,r)=({m},{n},{r}): {routes}", file=sys.stderr)
    return EXIT_CROSS_CHECK


# -- degree ---------------------------------------------------------------

def cmd_degree(args) -> int:
    try:
        res = delta(args.m, args.n, args.r)
    except CrossCheckError as exc:
        return _report_mismatch(exc)
    if args.format == "json":
        _emit(_dump_json(_degree_dict(res)))
    elif args.format == "csv":
        checks = ";".join(f"{name}={v}" for name, v in res.cross_checks)
        _emit(_csv([[res.m, res.n, res.r, res.value, res.method or "",
                     str(res.pataki_ok).lower(), str(res.conjectural).lower(), checks]],
                   ["m", "n", "r", "value", "method", "pataki_ok", "conjectural", "cross_checks"]))
    else:
        lines = [
            f"delta({res.m},{res.n},{res.r}) = {res.value}",
            f"method:       {res.method or '-'}",
            f"pataki_ok:    {str(res.pataki_ok).lower()}",
            f"conjectural:  {str(res.conjectural).lower()}",
        ]
        if res.cross_checks:
            lines.append("cross_checks: " + ", ".join(f"{name}={v}" for name, v in res.cross_checks))
        _emit("\n".join(lines))
    return EXIT_OK


# -- table ----------------------------------------------------------------

def cmd_table(args) -> int:
    try:
        tab = table(args.n_max, args.m_max)
    except CrossCheckError as exc:
        return _report_mismatch(exc)
    sums = sorted(tab.row_sums.items(), key=lambda kv: (kv[0][0], -kv[0][1]))
    if args.format == "json":
        _emit(_dump_json({
            "n_max": tab.n_max,
            "m_max": tab.m_max,
            "cells": [{"m": c.m, "n": c.n, "r": c.r, "degree": str(c.value),
                       "method": c.method, "conjectural": c.conjectural} for c in tab.cells],
            "row_sums": [{"n": n, "r": r, "sum": str(s)} for (n, r), s in sums],
        }))
    elif args.format == "csv":
        rows = [["cell", c.m, c.n, c.r, c.value, c.method] for c in tab.cells]
        rows += [["row_sum", "", n, r, s, ""] for (n, r), s in sums]
        _emit(_csv(rows, ["kind", "m", "n", "r", "value", "method"]))
    else:
        lines = []
        for n in range(2, tab.n_max + 1):
            lines.append(f"n = {n}")
            lines.append(f"  {'m':>3} {'r':>3} {'degree':>10}  method")
            for c in (c for c in tab.cells if c.n == n):
                flag = "  *" if c.conjectural else ""
                lines.append(f"  {c.m:>3} {c.r:>3} {c.value:>10}  {c.method}{flag}")
        lines.append("row sums over all m")
        for (n, r), s in sums:
            lines.append(f"  n={n} r={r}: {s}")
        lines.append("* conjectural value")
        _emit("\n".join(lines))
    return EXIT_OK


# -- ranks ----------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}")


def cmd_ranks(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.all_cells:
        hists = reproduce_rank_table(args.trials, seed, rank_rel_tol=args.rel_tol,
                                 fixed_constraints=args.fixed_constraints)
    else:
        if args.m is None or args.n is None:
            raise UsageError("--m and --n are required unless --all-cells is given")
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        cfg = ExperimentConfig(args.m, args.n, args.trials, seed, args.rel_tol,
                               fixed_constraints=args.fixed_constraints)
        hists = [rank_distribution(cfg)]
    if args.format == "json":
        _emit(histograms_to_json(hists))
    elif args.format == "csv":
        _emit(histograms_to_csv(hists))
    else:
        lines = [f"seed {seed}, {args.trials} trials per cell"]
        for h in hists:
            lines.append(f"m={h.m} n={h.n}: counted {h.counted}, ambiguous {h.ambiguous}, "
                         f"failures {h.solver_failures}, pataki violations {h.pataki_violations}, "
                         f"strict-comp violations {h.strict_comp_violations}")
            rows = compare_to_published(h) if (h.m, h.n) in PUBLISHED_RANKS else [
                {"rank": r, "empirical": p, "published": None} for r, p in h.percentages().items()]
            for row in rows:
                ref = "" if row["published"] is None else f"  (published {row['published']:.2f})"
                lines.append(f"  rank {row['rank']}: {row['empirical']:6.2f}%{ref}")
        _emit("\n".join(lines))
    return EXIT_OK


# -- solve ----------------------------------------------------------------

def _float(x: float):
    return x if np.isfinite(x) else str(x)


def cmd_solve(args) -> int:
    try:
        inst = load_instance(args.instance)
    except (OSError, InstanceFormatError) as exc:
        print(f"cannot read instance {args.instance!r}: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    sol = solve_sdp(inst)
    rx, rz = sol.ranks(args.rel_tol)
    doc = {
        "status": sol.status.value,
        "iterations": sol.iterations,
        "y": [float(v) for v in sol.y],
        "primal_objective": _float(sol.primal_objective),
        "dual_objective": _float(sol.dual_objective),
        "gap": _float(sol.gap),
        "primal_residual": _float(sol.primal_residual),
        "dual_residual": _float(sol.dual_residual),
        "rank_X": rx.as_dict(),
        "rank_Z": rz.as_dict(),
    }
    if args.format == "json":
        _emit(_dump_json(doc))
    elif args.format == "csv":
        rows = [[k, doc[k]] for k in ("status", "iterations", "primal_objective", "dual_objective",
                                      "gap", "primal_residual", "dual_residual")]
        rows += [[f"y{i + 1}", v] for i, v in enumerate(doc["y"])]
        rows += [["rank_X", rx.rank], ["gap_ratio_X", rx.as_dict()["gap_ratio"]],
                 ["rank_Z", rz.rank], ["gap_ratio_Z", rz.as_dict()["gap_ratio"]]]
        _emit(_csv(rows, ["key", "value"]))
    else:
        ys = ", ".join(f"{v:.6f}" for v in sol.y)
        lines = [
            f"status:     {sol.status.value} after {sol.iterations} iterations",
            f"y:          ({ys})",
            f"objectives: primal {sol.primal_objective:.10g}, dual {sol.dual_objective:.10g}",
            f"gap {sol.gap:.3e}, residuals primal {sol.primal_residual:.3e}, dual {sol.dual_residual:.3e}",
            f"rank X:     {rx.rank} (gap ratio {rx.gap_ratio:.3g}{', ambiguous' if rx.ambiguous else ''})",
            f"rank Z:     {rz.rank} (gap ratio {rz.gap_ratio:.3g}{', ambiguous' if rz.ambiguous else ''})",
        ]
        _emit("\n".join(lines))
    return EXIT_OK if sol.status is SolveStatus.OPTIMAL else EXIT_NUMERICAL


# -- check ----------------------------------------------------------------

def _stringify_values(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, list):
        return [_stringify_values(v) for v in obj]
    if isinstance(obj, dict):
        return {k: (v if k in ("query", "dual") else _stringify_values(v)) for k, v in obj.items()}
    return obj


def cmd_check(args) -> int:
    reports = run_checks(args.scope, args.n_max)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        docs = []
        for r in reports:
            d = r.as_dict()
            d["failures"] = _stringify_values(d["failures"])
            d["conjectural_confirmations"] = _stringify_values(d["conjectural_confirmations"])
            docs.append(d)
        _emit(_dump_json({"n_max": args.n_max, "passed": ok, "suites": docs}))
    elif args.format == "csv":
        _emit(_csv([[r.name, r.checked, len(r.failures), len(r.conjectural), str(r.passed).lower()]
                    for r in reports],
                   ["suite", "checked", "failures", "conjectural", "passed"]))
    else:
        lines = []
        for r in reports:
            lines.append(f"{r.name}: {'pass' if r.passed else 'FAIL'} "
                         f"({r.checked} checked, {len(r.failures)} failures)")
            for f in r.failures:
                lines.append(f"  failure {f}")
            if r.conjectural:
                lines.append("  conjectural confirmations:")
                for c in r.conjectural:
                    (m, n, rr), (dm, _, dr) = c["query"], c["dual"]
                    lines.append(f"    delta({m},{n},{rr}) = delta({dm},{n},{dr}) = {c['values'][0]}")
        _emit("\n".join(lines))
    if not ok:
        for r in reports:
            for f in r.failures:
                print(f"{r.name} failure: {f}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CROSS_CHECK


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdpdegree", description="Algebraic degree of SDP and rank experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp):
        sp.add_argument("--format", choices=FORMATS, default="human")

    d = sub.add_parser("degree", help="one value delta(m, n, r)")
    d.add_argument("--m", type=_positive, required=True)
    d.add_argument("--n", type=_positive, required=True)
    d.add_argument("--r", type=_positive, required=True)
    fmt(d)
    d.set_defaults(func=cmd_degree)

    t = sub.add_parser("table", help="all nonzero degrees up to n-max, with row sums")
    t.add_argument("--n-max", type=_positive, required=True)
    t.add_argument("--m-max", type=_positive, default=None)
    fmt(t)
    t.set_defaults(func=cmd_table)

    r = sub.add_parser("ranks", help="Monte-Carlo rank distribution of random SDPs")
    r.add_argument("--m", type=_positive)
    r.add_argument("--n", type=_positive)
    r.add_argument("--trials", type=_positive, default=1000)
    r.add_argument("--seed", type=int, default=None,
                   help=f"base seed (default: ${SEED_ENV} or 0)")
    r.add_argument("--all-cells", action="store_true", help="run every published (m, n) cell")
    r.add_argument("--rel-tol", type=float, default=1e-6)
    r.add_argument("--fixed-constraints", action="store_true",
                   help="draw A and b once per cell and vary only C")
    fmt(r)
    r.set_defaults(func=cmd_ranks)

    s = sub.add_parser("solve", help="solve an instance file or a bundled instance")
    s.add_argument("instance", help="path to a JSON instance, or a bundled name such as example22")
    s.add_argument("--rel-tol", type=float, default=1e-6)
    fmt(s)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="run the degree consistency suites")
    c.add_argument("--scope", choices=("duality", "class", "closed", "all"), default="all")
    c.add_argument("--n-max", type=_positive, default=6)
    fmt(c)
    c.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "degree" and not args.r < args.n:
            raise UsageError("need r < n")
        return args.func(args)
    except UsageError as exc:
        if not exc.reported:
            parser.print_usage(sys.stderr)
            print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
