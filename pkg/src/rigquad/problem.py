"""Problem files and report documents (JSON).

A problem file looks like::

    {"f": [["-0.3-0.4i", "1"], [], ["-1"]],
     "path": ["-1", "1"],
     "branch_value": "-0.2-0.7i",
     "e_tol": "2^-100",
     "strategy": "main"}

Rows of ``f`` are a_0 .. a_n (f = sum a_i(z) g^(n-i)), each listing the
coefficients of ascending powers of z.  Numbers are parsed at the planning
precision implied by ``e_tol``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from mpmath import mp, mpc, mpf

from .algebraic import BivariateDefiningPolynomial
from .arith import complex_json, decimal_digits, fmt_real, parse_complex, parse_real, \
    parse_tolerance, tolerance_bits
from .errors import ParseError
from .strategies import HEURISTIC, MAIN, REFERENCE, IntegrationReport, PlanConfig, \
    SegmentPlan, planning_precision

SCHEMA_VERSION = "1"
STRATEGIES = (MAIN, REFERENCE, HEURISTIC)
TOL_MODES = {"uniform": "uniform", "length": "length_weighted",
             "length_weighted": "length_weighted"}
_KEYS = {"f", "path", "branch_value", "e_tol", "strategy", "beta", "epsilon",
         "tolerance_mode", "precision_override"}
BOUND_DIGITS = 20


@dataclass(frozen=True)
class ProblemSpec:
    f: BivariateDefiningPolynomial
    z_start: mpc
    z_end: mpc
    branch_value: Optional[mpc]
    e_tol: mpf
    e_tol_text: str
    strategy: str = MAIN
    beta: Optional[float] = None
    epsilon: Optional[float] = None
    tolerance_mode: Optional[str] = None
    precision_override: Optional[int] = None

    def plan_config(self, base: PlanConfig = PlanConfig()) -> PlanConfig:
        kw = {}
        if self.beta is not None:
            kw["beta"] = self.beta
        if self.epsilon is not None:
            kw["epsilon"] = self.epsilon
        if self.tolerance_mode is not None:
            kw["tolerance_mode"] = self.tolerance_mode
        try:
            return PlanConfig(**{**base.__dict__, **kw})
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def _require(doc, key):
    if key not in doc:
        raise ParseError(f"problem is missing {key!r}")
    return doc[key]


def _unit_interval(value, name):
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name} must be a number") from exc
    if not 0 < x < 1:
        raise ParseError(f"{name} must lie in (0, 1)")
    return x


def parse_problem(doc) -> ProblemSpec:
    """Validate a decoded JSON problem document."""
    if not isinstance(doc, dict):
        raise ParseError("problem must be a JSON object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ParseError(f"unknown problem keys: {sorted(unknown)}")
    e_text = _require(doc, "e_tol")
    e_tol = parse_tolerance(e_text)
    prec = doc.get("precision_override")
    if prec is not None and (not isinstance(prec, int) or isinstance(prec, bool) or prec < 53):
        raise ParseError("precision_override must be an integer >= 53")
    with mp.workprec(prec or planning_precision(e_tol)):
        rows = _require(doc, "f")
        if not isinstance(rows, list) or len(rows) < 2 or not all(isinstance(r, list) for r in rows):
            raise ParseError("f must be a list of at least two coefficient rows")
        try:
            f = BivariateDefiningPolynomial.from_rows(
                [[parse_complex(c) for c in row] for row in rows])
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        path = _require(doc, "path")
        if not isinstance(path, list) or len(path) != 2:
            raise ParseError("path must be a pair [z_start, z_end]")
        z1, z2 = parse_complex(path[0]), parse_complex(path[1])
        if z1 == z2:
            raise ParseError("path endpoints coincide")
        bv = doc.get("branch_value")
        if bv is None:
            if f.n != 1:
                raise ParseError("branch_value is required when f has degree > 1 in g")
            branch = None
        else:
            branch = parse_complex(bv)
    strategy = doc.get("strategy", MAIN)
    if strategy not in STRATEGIES:
        raise ParseError(f"strategy must be one of {STRATEGIES}")
    mode = doc.get("tolerance_mode")
    if mode is not None:
        if mode not in TOL_MODES:
            raise ParseError("tolerance_mode must be uniform or length_weighted")
        mode = TOL_MODES[mode]
    beta = doc.get("beta")
    eps = doc.get("epsilon")
    return ProblemSpec(
        f=f, z_start=z1, z_end=z2, branch_value=branch, e_tol=e_tol,
        e_tol_text=str(e_text), strategy=strategy,
        beta=None if beta is None else _unit_interval(beta, "beta"),
        epsilon=None if eps is None else _unit_interval(eps, "epsilon"),
        tolerance_mode=mode, precision_override=prec)


def load_problem(text: str) -> ProblemSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_problem(doc)


def resolve_branch_value(spec: ProblemSpec):
    """The given branch value, or the unique root when f is linear in g."""
    if spec.branch_value is not None:
        return spec.branch_value
    a0, a1 = spec.f.coefficients_at(spec.z_start)
    return -a1 / a0


def value_digits(e_tol) -> int:
    return decimal_digits(tolerance_bits(e_tol)) + 2


def _real(x):
    return None if x is None else fmt_real(x, BOUND_DIGITS)


def segment_record(s) -> dict:
    return {
        "z_start": complex_json(s.z_start, BOUND_DIGITS),
        "z_end": complex_json(s.z_end, BOUND_DIGITS),
        "center": complex_json(s.center, BOUND_DIGITS),
        "delta": _real(s.delta),
        "r": _real(s.r),
        "M": _real(s.M),
        "gamma": _real(s.gamma),
        "N": s.N,
    }


def plan_document(plan: SegmentPlan, e_tol_text: str) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "plan",
        "strategy": plan.strategy,
        "beta": fmt_real(plan.beta, 6),
        "e_tol": e_tol_text,
        "precision_bits": plan.precision,
        "total_N": plan.total_N,
        "m": plan.m,
        "segments": [segment_record(s) for s in plan.segments],
    }
    if plan.disks:
        doc["disks"] = [{"center": complex_json(d.center, BOUND_DIGITS),
                         "radius": _real(d.radius),
                         "variation": _real(d.variation),
                         "absolute": _real(d.absolute)} for d in plan.disks]
    return doc


def report_document(report: IntegrationReport, e_tol_text: str,
                    wall_time_ms: Optional[int]) -> dict:
    digits = value_digits(report.plan.e_tol)
    with mp.workprec(report.precision_bits):
        value = complex_json(report.value, digits)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "report",
        "value": {**value, "digits": digits},
        "total_nodes": report.node_evaluations,
        "segments": [segment_record(s) for s in report.plan.segments],
        "precision_bits": report.precision_bits,
        "strategy": report.plan.strategy,
        "e_tol": e_tol_text,
        "error_budget": _real(report.error_budget),
        "rigorous": report.rigorous,
        "wall_time_ms": wall_time_ms,
    }
    if report.error_estimate is not None:
        doc["error_estimate"] = _real(report.error_estimate)
    return doc


def error_document(kind: str, message: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": "error",
            "error": {"type": kind, "message": message}}


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def load_schema(name: str = "report") -> dict:
    text = resources.files("rigquad").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def parse_value(doc: dict) -> mpc:
    """Read a {"re", "im"} value back at a precision matching its digits."""
    digits = int(doc.get("digits", 20))
    with mp.workdps(digits + 5):
        return mpc(parse_real(doc["re"]), parse_real(doc["im"]))


__all__ = ["ProblemSpec", "parse_problem", "load_problem", "plan_document",
           "report_document", "error_document", "canonical_json", "load_schema",
           "resolve_branch_value", "parse_value"]
