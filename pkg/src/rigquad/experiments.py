"""Node-count studies and cross-method benchmarks.

Families:

* pole family  g = (z - z0)^(-v) on [-1, 1], v in {1/2, 1}, encoded as
  (z - z0) g^2 - 1 or (z - z0) g - 1;
* I_q family   g = p(z)^(-1/2) with
  p(z) = 4 z^4 - (16 + 4q^2 + q^4) z^2 - q^2 (4 + q^2)^2;
* random bench bivariate f with integer coefficients in [-10, 10] and total
  degree at most 4, integrated over [-1, 1].

Heatmaps and sweeps only plan; they never run the quadratures.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .algebraic import AlgebraicIntegrand, BivariateDefiningPolynomial, CriticalSet, poly_roots
from .arith import working_precision
from .errors import RigError
from .strategies import (MAIN, REFERENCE, PlanConfig, ProxyModel, execute, plan_main,
                         plan_reference, planning_precision)
from .quadrature import heuristic_integrate

log = logging.getLogger(__name__)

PATH = (-1, 1)
SUPPORTED_V = (Fraction(1, 2), Fraction(1))


def _frac(v) -> Fraction:
    return Fraction(v).limit_denominator(1000) if isinstance(v, float) else Fraction(v)


def pole_polynomial(z0, v) -> BivariateDefiningPolynomial:
    v = _frac(v)
    if v == Fraction(1, 2):
        return BivariateDefiningPolynomial.from_rows([[-z0, 1], [], [-1]])
    if v == 1:
        return BivariateDefiningPolynomial.from_rows([[-z0, 1], [-1]])
    raise ValueError("algebraic encoding only for v = 1/2 and v = 1; use proxy bounds")


def pole_integrand(z0, v, precision: int) -> AlgebraicIntegrand:
    """(z - z0)^(-v) on its principal branch at z = -1."""
    with mp.workprec(precision):
        z0 = mpc(z0)
        g = (mpc(-1) - z0) ** (-mpf(_frac(v).numerator) / _frac(v).denominator)
        return AlgebraicIntegrand.build(pole_polynomial(z0, v), -1, g, precision)


def pole_closed_form(z0, v):
    """Integral of the principal branch of (z - z0)^(-v) over [-1, 1].

    Valid when z - z0 avoids the negative real axis along the path, i.e.
    Im z0 != 0 or z0 outside [-1, inf).
    """
    z0 = mpc(z0)
    v = _frac(v)
    if v == 1:
        return mpmath.log(1 - z0) - mpmath.log(-1 - z0)
    e = 1 - mpf(v.numerator) / v.denominator
    return ((1 - z0) ** e - (-1 - z0) ** e) / e


def pole_target(z0, v, precision: int, bound_mode: str = "lemma"):
    """What the planners need: the integrand, or just its pole in proxy mode.

    Proxy bounds only look at critical points, which allows any v > 0.
    """
    if bound_mode == "proxy" and _frac(v) not in SUPPORTED_V:
        with mp.workprec(precision):
            return CriticalSet((mpc(z0),))
    return pole_integrand(z0, v, precision)


def iq_rows(q):
    q = mpf(q)
    q2 = q * q
    return [[-q2 * (4 + q2) ** 2, 0, -(16 + 4 * q2 + q2 * q2), 0, 4], [], [-1]]


def iq_integrand(q, precision: int) -> AlgebraicIntegrand:
    """p(z)^(-1/2) for the quartic p of the I_q family, principal at z = -1."""
    with mp.workprec(precision):
        rows = iq_rows(q)
        p_at = sum(c * (-1) ** k for k, c in enumerate(rows[0]))
        g = 1 / mpmath.sqrt(mpc(p_at))
        return AlgebraicIntegrand.build(rows, -1, g, precision)


def iq_proxy(q) -> ProxyModel:
    return ProxyModel(scale=mpf(q) ** -0.5, exponent=mpf(1) / 2)


def pole_proxy(v) -> ProxyModel:
    v = _frac(v)
    return ProxyModel(scale=1, exponent=mpf(v.numerator) / v.denominator)


def node_counts(integrand, e_tol, config: PlanConfig) -> tuple:
    """(N1, N2) from the two planners."""
    p1 = plan_main(integrand, *PATH, e_tol, config)
    p2 = plan_reference(integrand, *PATH, e_tol, config)
    return p1.total_N, p2.total_N


def grid_values(count: int, lo=0.1, hi=0.8) -> list:
    if count == 1:
        return [Fraction(lo).limit_denominator(10**6)]
    lo, hi = Fraction(str(lo)), Fraction(str(hi))
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


@dataclass(frozen=True)
class HeatmapConfig:
    v: Fraction = Fraction(1, 2)
    e_tol: mpf = mpf(2) ** -100
    grid: int = 8
    lo: float = 0.1
    hi: float = 0.8
    bound_mode: str = "lemma"  # or "proxy"
    plan: PlanConfig = PlanConfig()


def heatmap_rows(cfg: HeatmapConfig) -> list:
    """Rows (x, y, N1, N2) over the grid, x fastest."""
    if cfg.grid > 200:
        raise ValueError("grid at most 200 x 200")
    prec = planning_precision(cfg.e_tol)
    plan_cfg = cfg.plan
    if cfg.bound_mode == "proxy":
        plan_cfg = replace(plan_cfg, proxy=pole_proxy(cfg.v))
    values = grid_values(cfg.grid, cfg.lo, cfg.hi)
    rows = []
    for y in values:
        for x in values:
            with mp.workprec(prec):
                z0 = mpc(mpf(x.numerator) / x.denominator, mpf(y.numerator) / y.denominator)
            integrand = pole_target(z0, cfg.v, prec, cfg.bound_mode)
            n1, n2 = node_counts(integrand, cfg.e_tol, plan_cfg)
            rows.append((_fmt_frac(x), _fmt_frac(y), n1, n2))
    return rows


def _fmt_frac(x: Fraction) -> str:
    return format(float(x), ".6g")


def iq_row(q, e_tol, plan_cfg: PlanConfig = PlanConfig(), execute_values: bool = True):
    """(q, N1_lemma, N1_proxy, N2_lemma, N2_proxy, value_re, value_im)."""
    q = mpf(q)
    prec = planning_precision(e_tol)
    integrand = iq_integrand(q, prec)
    lemma_main = plan_main(integrand, *PATH, e_tol, plan_cfg)
    n2_lemma = plan_reference(integrand, *PATH, e_tol, plan_cfg).total_N
    proxy_cfg = replace(plan_cfg, proxy=iq_proxy(q))
    n1_proxy = plan_main(integrand, *PATH, e_tol, proxy_cfg).total_N
    n2_proxy = plan_reference(integrand, *PATH, e_tol, proxy_cfg).total_N
    value = None
    if execute_values:
        p_exec = working_precision(e_tol, lemma_main.total_N)
        value = execute(lemma_main, integrand.with_precision(p_exec)).value
    return (q, lemma_main.total_N, n1_proxy, n2_lemma, n2_proxy, value)


def pole_row(v, q, e_tol, plan_cfg: PlanConfig = PlanConfig(), bound_mode: str = "lemma",
             precision: int | None = None):
    """(q, N1, N2, N1_dropped) for z0 = i q.

    N1_dropped is a diagnostic: the main plan's count after omitting
    segments whose integral is already below their tolerance share by the
    crude bound length * sup|g|.  It is never used for rigorous results.
    Pass ``precision`` when q is too small to resolve at the planning default.
    """
    q = mpf(q)
    prec = precision or planning_precision(e_tol)
    with mp.workprec(prec):
        z0 = mpc(0, q)
    integrand = pole_target(z0, v, prec, bound_mode)
    crit = integrand if isinstance(integrand, CriticalSet) else integrand.critical
    if bound_mode == "proxy":
        plan_cfg = replace(plan_cfg, proxy=pole_proxy(v))
    p1 = plan_main(integrand, *PATH, e_tol, plan_cfg)
    p2 = plan_reference(integrand, *PATH, e_tol, plan_cfg)
    vv = _frac(v)
    expo = mpf(vv.numerator) / vv.denominator
    kept = 0
    with mp.workprec(prec):
        for s in p1.segments:
            sup = crit.segment_distance(s.z_start, s.z_end) ** -expo
            if not s.length * sup <= s.gamma * mpf(e_tol):
                kept += s.N
    return (q, p1.total_N, p2.total_N, kept)


# --- random bench -----------------------------------------------------------

BENCH_CLEARANCE = mpf("0.1")


@dataclass(frozen=True)
class BenchInstance:
    instance_id: int
    rows: tuple
    branch_value: mpc


def _random_rows(rng: random.Random) -> list:
    n = rng.randint(1, 3)
    while True:
        rows = [[rng.randint(-10, 10) for _ in range(4 - n + i + 1)] for i in range(n + 1)]
        if any(rows[0]) and any(any(r) for r in rows[1:]):
            return rows


def draw_instances(count: int, seed: int, precision: int = 128, max_tries: int = 10000):
    """Deterministically draw ``count`` admissible bench instances.

    Candidates whose critical points come within 0.1 of [-1, 1] or whose
    curve degenerates are rejected and redrawn; rejections are logged.
    """
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("too many rejected bench instances")
        rows = _random_rows(rng)
        pick = rng.random()
        try:
            with mp.workprec(precision):
                f = BivariateDefiningPolynomial.from_rows(rows)
                roots = sorted(poly_roots(f.g_polynomial(-1), precision),
                               key=lambda r: (float(r.real), float(r.imag)))
                guess = roots[int(pick * len(roots))]
                integrand = AlgebraicIntegrand.build(f, -1, guess, precision)
                if not integrand.critical.segment_distance(*PATH) > BENCH_CLEARANCE:
                    log.info("bench: rejected draw %d (critical point near path)", tries)
                    continue
        except (RigError, ValueError) as exc:
            log.info("bench: rejected draw %d (%s)", tries, exc)
            continue
        out.append(BenchInstance(len(out), tuple(tuple(r) for r in rows), integrand.branch_value))
    return out


def model_time(orders) -> float:
    """Deterministic cost model: evaluations plus O(N^1.7) node generation."""
    return float(sum(n + 0.01 * n ** 1.7 for n in orders))


def bench_row(inst: BenchInstance, e_tol, plan_cfg: PlanConfig = PlanConfig(),
              timing: str = "model"):
    """(id, N_main, N_ref, N_heur, t_main, t_ref, t_heur, agree, values)."""
    e_tol = mpf(e_tol)
    p_plan = planning_precision(e_tol)
    integrand = AlgebraicIntegrand.build(inst.rows, -1, inst.branch_value, p_plan)
    results = {}
    for name, planner in ((MAIN, plan_main), (REFERENCE, plan_reference)):
        t0 = time.perf_counter()
        plan_ = planner(integrand, *PATH, e_tol, plan_cfg)
        rep = execute(plan_, integrand.with_precision(working_precision(e_tol, plan_.total_N)))
        wall = time.perf_counter() - t0
        t = model_time(s.N for s in plan_.segments) if timing == "model" else wall
        results[name] = (plan_.total_N, t, rep.value)
    t0 = time.perf_counter()
    heur = heuristic_integrate(integrand, *PATH, e_tol)
    wall = time.perf_counter() - t0
    orders, n = [], 8
    while n <= heur.final_order:
        orders.append(n)
        n *= 2
    th = model_time(orders) if timing == "model" else wall
    vm, vr, vh = results[MAIN][2], results[REFERENCE][2], heur.value
    band = 1000 * e_tol
    agree = abs(vm - vr) <= band and abs(vm - vh) <= band and abs(vr - vh) <= band
    return (inst.instance_id, results[MAIN][0], results[REFERENCE][0], heur.nodes_used,
            results[MAIN][1], results[REFERENCE][1], th, bool(agree), (vm, vr, vh))
