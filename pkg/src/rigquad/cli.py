"""``rig`` command line: integrate, plan, nodes and experiment sweeps."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from mpmath import mp, mpf

from . import experiments as ex
from .algebraic import AlgebraicIntegrand
from .arith import fmt_real, parse_tolerance, decimal_digits
from .errors import ParseError, RigError
from .problem import (TOL_MODES, canonical_json, error_document, load_problem,
                      plan_document, report_document, resolve_branch_value)
from .quadrature import legendre_scheme
from .strategies import HEURISTIC, PlanConfig, integrate, plan, planning_precision

log = logging.getLogger("rigquad")


def _add_problem_flags(p):
    p.add_argument("problem", help="problem JSON file ('-' for stdin)")
    p.add_argument("--strategy", choices=["main", "reference", "heuristic"])
    p.add_argument("--beta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--tol-mode", choices=sorted(TOL_MODES))
    p.add_argument("--precision", type=int, help="override the working precision (bits)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rig", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="integrate a problem file, print a JSON report")
    _add_problem_flags(p)
    p.add_argument("--no-wall-time", action="store_true",
                   help="emit wall_time_ms as null for byte-reproducible output")

    p = sub.add_parser("plan", help="print the segment plan without integrating")
    _add_problem_flags(p)

    p = sub.add_parser("nodes", help="Gauss-Legendre nodes and weights as CSV")
    p.add_argument("N", type=int)
    p.add_argument("--precision", type=int, default=128)
    p.add_argument("--out")

    p = sub.add_parser("experiment", help="node-count studies and benchmarks (CSV)")
    exp = p.add_subparsers(dest="experiment", required=True)

    h = exp.add_parser("heatmap", help="N1, N2 for z0 = x + iy on a grid")
    h.add_argument("--v", default="1/2")
    h.add_argument("--e-tol", default="2^-100")
    h.add_argument("--grid", type=int, default=8)
    h.add_argument("--lo", type=float, default=0.1)
    h.add_argument("--hi", type=float, default=0.8)
    h.add_argument("--bound", choices=["lemma", "proxy"], default="lemma")
    h.add_argument("--out")

    q = exp.add_parser("iq", help="lemma and proxy node counts for the I_q family")
    q.add_argument("--q", default="0.5,0.1,0.02")
    q.add_argument("--e-tol", default="2^-100")
    q.add_argument("--no-values", action="store_true", help="skip executing the main plan")
    q.add_argument("--out")

    pl = exp.add_parser("pole", help="N1, N2 for z0 = iq")
    pl.add_argument("--v", default="1/2")
    pl.add_argument("--q", default="0.1,0.01,0.001,0.0001")
    pl.add_argument("--e-tol", default="2^-100")
    pl.add_argument("--bound", choices=["lemma", "proxy"], default="lemma")
    pl.add_argument("--out")

    b = exp.add_parser("bench", help="random instances, all three methods")
    b.add_argument("--count", type=int, default=30)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--e-tol", default="2^-60")
    b.add_argument("--timing", choices=["model", "wall"], default="model")
    b.add_argument("--out")
    return parser


def _read_problem(args):
    text = sys.stdin.read() if args.problem == "-" else _read_file(args.problem)
    spec = load_problem(text)
    over = {}
    if args.strategy:
        over["strategy"] = args.strategy
    if args.beta is not None:
        over["beta"] = args.beta
    if args.epsilon is not None:
        over["epsilon"] = args.epsilon
    if args.tol_mode:
        over["tolerance_mode"] = TOL_MODES[args.tol_mode]
    if args.precision is not None:
        if args.precision < 53:
            raise ParseError("--precision must be at least 53")
        over["precision_override"] = args.precision
    return replace(spec, **over)


def _read_file(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _config(spec) -> PlanConfig:
    try:
        return spec.plan_config()
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def cmd_integrate(args, out):
    spec = _read_problem(args)
    t0 = time.perf_counter()
    report = integrate(spec.f, spec.z_start, spec.z_end, resolve_branch_value(spec),
                       spec.e_tol, spec.strategy, _config(spec), spec.precision_override)
    wall = None if args.no_wall_time else int(round(1000 * (time.perf_counter() - t0)))
    out.write(canonical_json(report_document(report, spec.e_tol_text, wall)))


def cmd_plan(args, out):
    spec = _read_problem(args)
    if spec.strategy == HEURISTIC:
        raise ParseError("the heuristic has no plan")
    prec = spec.precision_override or planning_precision(spec.e_tol)
    integrand = AlgebraicIntegrand.build(spec.f, spec.z_start, resolve_branch_value(spec), prec)
    plan_ = plan(integrand, spec.z_start, spec.z_end, spec.e_tol, spec.strategy, _config(spec))
    out.write(canonical_json(plan_document(plan_, spec.e_tol_text)))


def _write_csv(rows, header, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def cmd_nodes(args, out):
    if args.N < 1:
        raise ParseError("N must be positive")
    if args.precision < 53:
        raise ParseError("--precision must be at least 53")
    scheme = legendre_scheme(args.N, args.precision)
    digits = decimal_digits(args.precision)
    with mp.workprec(args.precision):
        rows = [(fmt_real(x, digits), fmt_real(w, digits))
                for x, w in zip(scheme.nodes, scheme.weights)]
    _write_csv(rows, ["node", "weight"], out)


def _tol(text):
    try:
        return parse_tolerance(text)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _v(text):
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad exponent v: {text!r}") from exc
    if v <= 0:
        raise ParseError("v must be positive")
    return v


def _q_list(text):
    try:
        qs = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad q list: {text!r}") from exc
    if not qs or not all(0 < q < 1 for q in qs):
        raise ParseError("every q must lie in (0, 1)")
    return qs


def _mpq(q: Fraction):
    return mpf(q.numerator) / q.denominator


def _num(x, digits=20):
    return fmt_real(x, digits)


def cmd_experiment(args, out):
    kind = args.experiment
    if kind == "heatmap":
        v = _v(args.v)
        if v not in ex.SUPPORTED_V and args.bound != "proxy":
            raise ParseError("lemma bounds need v = 1/2 or v = 1; use --bound proxy")
        cfg = ex.HeatmapConfig(v=v, e_tol=_tol(args.e_tol), grid=args.grid, lo=args.lo,
                               hi=args.hi, bound_mode=args.bound)
        _write_csv(ex.heatmap_rows(cfg), ["x", "y", "N1", "N2"], out)
    elif kind == "iq":
        e_tol = _tol(args.e_tol)
        rows = []
        for q in _q_list(args.q):
            with mp.workprec(planning_precision(e_tol)):
                r = ex.iq_row(_mpq(q), e_tol, execute_values=not args.no_values)
            val = r[5]
            digits = decimal_digits(planning_precision(e_tol) - 30)
            re_, im_ = ("", "") if val is None else (_num(val.real, digits), _num(val.imag, digits))
            rows.append((str(q), r[1], r[2], r[3], r[4], re_, im_))
        _write_csv(rows, ["q", "N1_lemma", "N1_proxy", "N2_lemma", "N2_proxy",
                          "value_re", "value_im"], out)
    elif kind == "pole":
        v = _v(args.v)
        if v not in ex.SUPPORTED_V and args.bound != "proxy":
            raise ParseError("lemma bounds need v = 1/2 or v = 1; use --bound proxy")
        e_tol = _tol(args.e_tol)
        rows = []
        for q in _q_list(args.q):
            with mp.workprec(planning_precision(e_tol)):
                r = ex.pole_row(v, _mpq(q), e_tol, bound_mode=args.bound)
            rows.append((str(q), r[1], r[2], r[3]))
        _write_csv(rows, ["q", "N1", "N2", "N1_dropped"], out)
    elif kind == "bench":
        e_tol = _tol(args.e_tol)
        rows = []
        for inst in ex.draw_instances(args.count, args.seed):
            r = ex.bench_row(inst, e_tol, timing=args.timing)
            rows.append((r[0], r[1], r[2], r[3], f"{r[4]:.6g}", f"{r[5]:.6g}",
                         f"{r[6]:.6g}", str(r[7]).lower()))
        _write_csv(rows, ["instance_id", "N_main", "N_ref", "N_heuristic", "t_main",
                          "t_ref", "t_heuristic", "values_agree"], out)


COMMANDS = {"integrate": cmd_integrate, "plan": cmd_plan, "nodes": cmd_nodes,
            "experiment": cmd_experiment}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    target = getattr(args, "out", None)
    buf = io.StringIO()
    try:
        COMMANDS[args.command](args, buf)
    except RigError as exc:
        sys.stdout.write(canonical_json(error_document(exc.kind, str(exc))))
        return exc.exit_code
    if target:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
        if args.command == "experiment" and args.experiment == "bench":
            meta = {"path": ["-1", "1"], "clearance": "0.1", "seed": args.seed,
                    "count": args.count, "e_tol": args.e_tol, "timing": args.timing,
                    "timing_units": "model cost units" if args.timing == "model" else "seconds"}
            Path(target + ".meta.json").write_text(canonical_json(meta), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
