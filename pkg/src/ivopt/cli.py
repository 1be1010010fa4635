"""Command-line front end: ``ivopt parse|eval|check|efficiency|sweep``.

Exit codes: 0 holds, 1 fails, 2 inconclusive, 64 usage, 65 parse error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import dsl
from .calculus import DEFAULT_CONFIG, NoConvergence
from .interval import IntervalError, format_interval, format_real
from .ivf import Box
from .optimality import (
    CheckReport,
    MultiplierGrid,
    Status,
    composite_check,
    efficiency_report,
    fermat_check,
    fritz_john_check,
    kkt_check,
)
from .subdiff import UnsupportedShape

EXIT = {Status.HOLDS: 0, Status.FAILS: 1, Status.INCONCLUSIVE: 2}
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ivopt", description="Interval optimization problem checker.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="parse a problem file and print it canonically")
    sp.add_argument("file")

    sp = sub.add_parser("eval", help="evaluate objective and constraints at a point")
    sp.add_argument("file")
    sp.add_argument("--at", type=_floats, required=True)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("check", help="test an optimality condition at a point")
    sp.add_argument("kind", choices=["fermat", "fj", "kkt", "composite"])
    sp.add_argument("file")
    sp.add_argument("--at", type=_floats, required=True)
    sp.add_argument("--grid", type=int, default=21, help="points per coordinate for Slater sampling")
    sp.add_argument("--simplex-res", type=int, default=100)
    sp.add_argument("--delta-max", type=float, default=10.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("efficiency", help="grid test of efficiency and weak efficiency")
    sp.add_argument("file")
    sp.add_argument("--at", type=_floats, required=True)
    sp.add_argument("--grid", type=int, required=True, help="points per coordinate")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("sweep", help="tabulate the objective on a grid as CSV")
    sp.add_argument("file")
    sp.add_argument("--grid", type=int, required=True, help="points per coordinate")
    sp.add_argument("--over", type=_floats, default=None, help="lo,hi range per coordinate, overriding the box")
    sp.add_argument("--out", default="-")
    return p


def _point(args, pf: dsl.ProblemFile) -> np.ndarray:
    y = np.asarray(args.at, dtype=float)
    if y.size != len(pf.vars):
        raise UsageError(f"--at has {y.size} values, the problem has {len(pf.vars)} variables")
    return y


def _emit_report(name: str, rep: CheckReport, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps({"check": name, **rep.to_json()}) + "\n")
        return
    out.write(f"{name}: {rep.verdict.value}\n")
    out.write(f"  residual: {format_real(rep.residual)}\n")
    if rep.certificate is not None:
        d = ", ".join(format_real(v) for v in rep.certificate.delta)
        out.write(f"  certificate: delta0={format_real(rep.certificate.delta0)} delta=[{d}]\n")
    if rep.witness is not None:
        out.write("  witness: " + ",".join(format_real(v) for v in rep.witness) + "\n")
    for note in rep.notes:
        out.write(f"  note: {note}\n")
    for flag in rep.flags:
        out.write(f"  flag: {flag}\n")


def cmd_parse(args, out) -> int:
    out.write(dsl.pretty_print(dsl.load(args.file)))
    return 0


def cmd_eval(args, out) -> int:
    pf = dsl.load(args.file)
    prob = dsl.compile(pf)
    y = _point(args, pf)
    t = prob.objective(y)
    gs = prob.constraint_values(y)
    if args.json:
        out.write(json.dumps({"objective": [t.lo, t.hi], "constraints": gs}) + "\n")
    else:
        out.write(f"T = {format_interval(t)}\n")
        for j, v in enumerate(gs, 1):
            out.write(f"g{j} = {format_real(v)}\n")
    return 0


def cmd_check(args, out) -> int:
    pf = dsl.load(args.file)
    prob = dsl.compile(pf)
    y = _point(args, pf)
    cfg = DEFAULT_CONFIG
    try:
        if args.kind == "composite":
            split = dsl.compile_split(pf)
            if split is None:
                raise UsageError("composite check needs an objective of the form 'min smooth: ... + nonsmooth: ...'")
            sub_h = dsl.expr_subdifferential(pf.split[1], pf, y, cfg)
            rep = composite_check(split[0], sub_h, y, cfg, tol=args.tol)
        else:
            sub_t = dsl.expr_subdifferential(pf.objective, pf, y, cfg)
            if args.kind == "fermat":
                rep = fermat_check(prob.objective, y, sub_t, tol=args.tol)
            else:
                subg = dsl.constraint_gradients(pf, y, cfg)
                mg = MultiplierGrid(args.simplex_res, args.delta_max)
                if args.kind == "fj":
                    rep = fritz_john_check(prob, y, sub_t, subg, mg, tol=args.tol)
                else:
                    box = prob.box
                    samples = box.grid(args.grid) if np.all(np.isfinite(box.lows + box.highs)) else [y]
                    rep = kkt_check(prob, y, sub_t, subg, mg, samples, tol=args.tol)
    except (UnsupportedShape, NoConvergence) as exc:
        rep = CheckReport(Status.INCONCLUSIVE, notes=[str(exc)])
    _emit_report(args.kind, rep, args.json, out)
    return EXIT[rep.verdict]


def cmd_efficiency(args, out) -> int:
    pf = dsl.load(args.file)
    prob = dsl.compile(pf)
    y = _point(args, pf)
    grid = prob.box.grid(args.grid)
    reps = efficiency_report(prob, y, grid, jobs=args.jobs)
    if args.json:
        out.write(json.dumps({k: r.to_json() for k, r in reps.items()}) + "\n")
    else:
        for k, r in reps.items():
            _emit_report(k, r, False, out)
    # exit status tracks weak efficiency, the notion the conditions characterize
    return EXIT[reps["weak_efficient"].verdict]


def cmd_sweep(args, out) -> int:
    pf = dsl.load(args.file)
    prob = dsl.compile(pf)
    box = prob.box
    if args.over is not None:
        if len(args.over) != 2 * box.dim:
            raise UsageError(f"--over needs {2 * box.dim} numbers (lo,hi per coordinate)")
        box = Box(tuple(args.over[0::2]), tuple(args.over[1::2]))
    pts = box.grid(args.grid)
    split = dsl.compile_split(pf)
    names = ["y"] if box.dim == 1 else list(pf.names)
    header = names + ["t_lower", "t_upper"] + (["obj_lower", "obj_upper"] if split else [])
    fh = out if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for y in pts:
            t = (split[0] if split else prob.objective)(y)
            row = [format_real(v) for v in y] + [format_real(t.lo), format_real(t.hi)]
            if split:
                o = prob.objective(y)
                row += [format_real(o.lo), format_real(o.hi)]
            w.writerow(row)
    finally:
        if fh is not out:
            fh.close()
    return 0


COMMANDS = {"parse": cmd_parse, "eval": cmd_eval, "check": cmd_check, "efficiency": cmd_efficiency, "sweep": cmd_sweep}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except dsl.DslError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, OSError, IntervalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
