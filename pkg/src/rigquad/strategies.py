"""Path-splitting strategies and their execution.

``plan_main`` bisects the path until each piece sits well inside a disk free
of critical points and gives each piece its own round Bernstein ellipse.
``plan_reference`` keeps one, possibly very eccentric, ellipse around the
whole path and bounds the integrand on it through a covering by disks.
Plans are pure geometry plus bounds; ``execute`` runs the quadratures.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

import mpmath
from mpmath import mp, mpc, mpf

from .algebraic import AlgebraicIntegrand, CriticalSet, _Tracker, continue_branch
from .arith import up, working_precision
from .bounds import disk_bound, proxy_bound
from .errors import GeometryError
from .quadrature import (_integrate_tracked, heuristic_integrate, legendre_scheme,
                         required_order)

MAIN = "main"
REFERENCE = "reference"
HEURISTIC = "heuristic"


@dataclass(frozen=True)
class ProxyModel:
    """M_proxy(z0, delta) = scale * (|z0 - alpha| - delta)^(-exponent)."""

    scale: object = 1
    exponent: object = 0.5


@dataclass(frozen=True)
class PlanConfig:
    beta: float = 0.9
    tolerance_mode: str = "uniform"  # or "length_weighted"
    epsilon: float = 0.05
    max_depth: int = 60
    r_max: float = 1.76
    taylor_ratio: float = 0.5
    proxy: Optional[ProxyModel] = None
    max_disks: int = 4000
    max_shrinks: int = 60

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.tolerance_mode not in ("uniform", "length_weighted"):
            raise ValueError(f"unknown tolerance mode {self.tolerance_mode!r}")


@dataclass
class PlannedSegment:
    z_start: mpc
    z_end: mpc
    center: mpc
    delta: Optional[mpf]
    r: Optional[mpf]
    M: Optional[mpf]
    gamma: Optional[mpf]
    N: int

    @property
    def length(self):
        return abs(self.z_end - self.z_start)


@dataclass
class CoverDisk:
    center: mpc
    radius: mpf
    variation: mpf
    absolute: mpf


@dataclass
class SegmentPlan:
    segments: list
    strategy: str
    beta: float
    e_tol: mpf
    precision: int
    disks: list = field(default_factory=list)

    @property
    def total_N(self) -> int:
        return sum(s.N for s in self.segments)

    @property
    def m(self) -> int:
        return len(self.segments)


@dataclass
class IntegrationReport:
    value: mpc
    plan: SegmentPlan
    error_budget: mpf
    precision_bits: int
    node_evaluations: int
    per_segment_values: list
    rigorous: bool = True
    error_estimate: Optional[mpf] = None


def cost(plan: SegmentPlan) -> int:
    """Total number of integrand evaluations, sum_j N_j."""
    return plan.total_N


def _critical_of(integrand):
    if isinstance(integrand, AlgebraicIntegrand):
        return integrand.critical
    if isinstance(integrand, CriticalSet):
        return integrand
    raise TypeError("expected an AlgebraicIntegrand or a CriticalSet")


def _precision_of(integrand):
    return integrand.precision if isinstance(integrand, AlgebraicIntegrand) else mp.prec


def disk_estimates(integrand, centers, radii, config: PlanConfig) -> list:
    """(variation, absolute, certificate) for each disk D(centers[i], radii[i]).

    Certified ("lemma") bounds continue the branch through the centers in the given order.
    """
    crit = _critical_of(integrand)
    if config.proxy is not None:
        out = []
        for c, d in zip(centers, radii):
            alpha = crit.nearest(c)
            if alpha is None:
                v = up(mpf(config.proxy.scale))
            else:
                v = proxy_bound(config.proxy.scale, config.proxy.exponent, alpha, c, d)
            out.append((v, v, None))
        return out
    if not isinstance(integrand, AlgebraicIntegrand):
        raise TypeError("lemma bounds need an AlgebraicIntegrand")
    gs = continue_branch(integrand, centers)
    out = []
    for c, d, g in zip(centers, radii, gs):
        cert = disk_bound(integrand, c, d, g, config.taylor_ratio)
        out.append((cert.variation_bound, cert.absolute_bound, cert))
    return out


def _check_path(crit, z1, z2):
    if z1 == z2:
        raise ValueError("path endpoints coincide")
    if not crit.segment_distance(z1, z2) > 0:
        raise GeometryError("critical point on the integration path")


def split_segments(crit: CriticalSet, z1, z2, beta, max_depth=60) -> list:
    """Bisect [z1, z2] until beta * rho_j > half-length for every piece.

    rho_j is the distance from the piece's midpoint to the nearest critical
    point.  Returns (start, end, midpoint, rho) tuples in path order.
    """
    out = []
    beta = mpf(beta)

    def visit(a, b, depth):
        c = (a + b) / 2
        half_len = abs(b - a) / 2
        rho = crit.distance(c)
        if beta * rho > half_len:
            out.append((a, b, c, rho))
            return
        if depth >= max_depth:
            raise GeometryError("critical point too close to path")
        visit(a, c, depth + 1)
        visit(c, b, depth + 1)

    visit(mpc(z1), mpc(z2), 0)
    return out


def plan_main(integrand, z1, z2, e_tol, config: PlanConfig = PlanConfig()) -> SegmentPlan:
    """Adaptive bisection plan (one round ellipse per segment)."""
    prec = _precision_of(integrand)
    with mp.workprec(prec):
        z1, z2, e_tol = mpc(z1), mpc(z2), mpf(e_tol)
        crit = _critical_of(integrand)
        _check_path(crit, z1, z2)
        pieces = split_segments(crit, z1, z2, config.beta, config.max_depth)
        beta = mpf(config.beta)
        cosh_rmax = mpmath.cosh(mpf(config.r_max))
        deltas, rs = [], []
        for a, b, c, rho in pieces:
            half_len = abs(b - a) / 2
            delta = half_len * cosh_rmax if mpmath.isinf(rho) else beta * rho
            deltas.append(delta)
            rs.append(mpmath.acosh(delta / half_len))
        est = disk_estimates(integrand, [p[2] for p in pieces], deltas, config)
        total_len = abs(z2 - z1)
        m = len(pieces)
        segments = []
        for (a, b, c, _), delta, r, (var, _, _) in zip(pieces, deltas, rs, est):
            if config.tolerance_mode == "uniform":
                gamma = mpf(1) / m
            else:
                gamma = abs(b - a) / total_len
            N = required_order(var, r, abs(b - a), gamma * e_tol)
            segments.append(PlannedSegment(a, b, c, delta, r, var, gamma, N))
        return SegmentPlan(segments, MAIN, config.beta, e_tol, prec)


def ellipse_radius(mapped: CriticalSet, epsilon, r_max):
    """(1 - eps) min_i acosh((|a_i - 1| + |a_i + 1|) / 2) in mapped coordinates."""
    if not len(mapped):
        return mpf(r_max)
    best = mpmath.inf
    for a, e in zip(mapped.points, mapped.radii):
        s = (abs(a - 1) + abs(a + 1)) / 2 - e
        if not s > 1:
            raise GeometryError("critical point on the integration path")
        best = min(best, mpmath.acosh(s))
    return (1 - mpf(epsilon)) * best


def cover_ellipse(mapped: CriticalSet, r, beta, max_disks=4000):
    """Greedy left-to-right covering of L(-1, 1, r) by disks on the real axis.

    A disk at real c with radius delta > sinh(r) covers the part of the
    ellipse with |Re z - c| <= sqrt(delta^2 - sinh(r)^2).  Disk radii are
    beta times the distance to the nearest critical point.  Returns
    [(center, radius)] or None when the slab condition fails somewhere.
    """
    a, b = mpmath.cosh(r), mpmath.sinh(r)
    beta = mpf(beta)
    if not len(mapped):
        return [(mpf(0), a)]

    def radius(c):
        return beta * mapped.distance(mpc(c))

    def width(c):
        d = radius(c)
        return mpmath.sqrt(d * d - b * b) if d > b else None

    xf = -a
    disks = []
    while True:
        if width(xf) is None:
            return None
        lo, hi = xf, xf + 2
        whi = width(hi)
        if whi is not None and hi - whi <= xf:
            c = hi
        else:
            for _ in range(60):
                mid = (lo + hi) / 2
                wm = width(mid)
                if wm is not None and mid - wm <= xf:
                    lo = mid
                else:
                    hi = mid
            c = lo
        wc = width(c)
        disks.append((c, radius(c)))
        reach = c + wc
        if reach >= a:
            return disks
        if len(disks) >= max_disks or not reach > xf:
            return None
        xf = reach


def plan_reference(integrand, z1, z2, e_tol, config: PlanConfig = PlanConfig()) -> SegmentPlan:
    """Single-ellipse plan with the ellipse bounded through a disk covering."""
    prec = _precision_of(integrand)
    with mp.workprec(prec):
        z1, z2, e_tol = mpc(z1), mpc(z2), mpf(e_tol)
        crit = _critical_of(integrand)
        _check_path(crit, z1, z2)
        mid, half = (z1 + z2) / 2, (z2 - z1) / 2
        mapped = crit.mapped(mid, half)
        r = ellipse_radius(mapped, config.epsilon, config.r_max)
        cover = None
        for _ in range(config.max_shrinks):
            cover = cover_ellipse(mapped, r, config.beta, config.max_disks)
            if cover is not None:
                break
            r = r * mpf(0.9)
        if cover is None:
            raise GeometryError("could not cover the ellipse by critical-point-free disks")
        scale = abs(half)
        centers = [mid + half * c for c, _ in cover]
        radii = [d * scale for _, d in cover]
        est = disk_estimates(integrand, centers, radii, config)
        disks = [CoverDisk(c, d, v, ab) for c, d, (v, ab, _) in zip(centers, radii, est)]
        if len(disks) == 1:
            M = disks[0].variation
        else:
            M = max(d.absolute for d in disks)
        N = required_order(M, r, abs(z2 - z1), e_tol)
        seg = PlannedSegment(z1, z2, mid, mpmath.cosh(r) * scale, r, M, mpf(1), N)
        return SegmentPlan([seg], REFERENCE, config.beta, e_tol, prec, disks)


def execute(plan: SegmentPlan, integrand: AlgebraicIntegrand) -> IntegrationReport:
    """Run the planned quadratures and add them up."""
    prec = integrand.precision
    with mp.workprec(prec):
        first = plan.segments[0].z_start
        tracker = _Tracker(integrand)
        g = continue_branch(integrand, [first], tracker=tracker)[0]
        schemes = {}
        values = []
        for seg in plan.segments:
            if seg.N not in schemes:
                schemes[seg.N] = legendre_scheme(seg.N, prec)
            val, g = _integrate_tracked(integrand, seg.z_start, seg.z_end,
                                        schemes[seg.N], g, tracker)
            values.append(val)
        total = mpmath.fsum(values)
        budget = mpmath.fsum(s.gamma for s in plan.segments) * plan.e_tol
        return IntegrationReport(total, plan, budget, prec, plan.total_N, values)


def plan(integrand, z1, z2, e_tol, strategy: str = MAIN,
         config: PlanConfig = PlanConfig()) -> SegmentPlan:
    if strategy == MAIN:
        return plan_main(integrand, z1, z2, e_tol, config)
    if strategy == REFERENCE:
        return plan_reference(integrand, z1, z2, e_tol, config)
    raise ValueError(f"unknown strategy {strategy!r}")


def planning_precision(e_tol) -> int:
    # room for up to 2^16 nodes before execution fixes the exact precision
    return working_precision(e_tol, 1 << 16)


def integrate(f, z1, z2, branch_value, e_tol, strategy: str = MAIN,
              config: PlanConfig = PlanConfig(), precision: int | None = None
              ) -> IntegrationReport:
    """Integrate the branch of f with value ``branch_value`` at z1 over [z1, z2].

    Planning runs at a provisional precision; execution then uses the
    guard-bit contract for the planned node count unless ``precision`` is
    given.
    """
    e_tol = mpf(e_tol)
    p_plan = precision or planning_precision(e_tol)
    integrand = AlgebraicIntegrand.build(f, z1, branch_value, p_plan)
    if strategy == HEURISTIC:
        with mp.workprec(p_plan):
            res = heuristic_integrate(integrand, z1, z2, e_tol)
            seg = PlannedSegment(mpc(z1), mpc(z2), (mpc(z1) + mpc(z2)) / 2,
                                 None, None, None, mpf(1), res.final_order)
            plan_ = SegmentPlan([seg], HEURISTIC, config.beta, e_tol, p_plan)
            return IntegrationReport(res.value, plan_, e_tol, p_plan, res.nodes_used,
                                     [res.value], rigorous=False,
                                     error_estimate=res.error_estimate)
    plan_ = plan(integrand, z1, z2, e_tol, strategy, config)
    p_exec = precision or working_precision(e_tol, plan_.total_N)
    return execute(plan_, integrand.with_precision(p_exec))


def validate_plan(plan_: SegmentPlan, crit: CriticalSet, z1, z2) -> list:
    """Problems with a plan's geometry; an empty list means sound."""
    problems = []
    segs = plan_.segments
    tol = mpf(2) ** (20 - plan_.precision)
    with mp.workprec(plan_.precision):
        if abs(segs[0].z_start - mpc(z1)) > tol or abs(segs[-1].z_end - mpc(z2)) > tol:
            problems.append("plan does not start/end at the path endpoints")
        for s, t in zip(segs, segs[1:]):
            if s.z_end != t.z_start:
                problems.append("consecutive segments do not meet")
        gsum = mpf(0)
        for j, s in enumerate(segs):
            half_len = s.length / 2
            if not s.delta > half_len:
                problems.append(f"segment {j}: delta does not exceed half length")
            if not s.r > 0:
                problems.append(f"segment {j}: r not positive")
            elif abs(mpmath.acosh(s.delta / half_len) - s.r) > tol * (1 + s.r):
                problems.append(f"segment {j}: r inconsistent with delta")
            if plan_.strategy == MAIN and not s.delta < crit.distance(s.center):
                problems.append(f"segment {j}: disk reaches a critical point")
            if not s.gamma > 0:
                problems.append(f"segment {j}: gamma not positive")
            gsum += s.gamma
        if gsum > 1 + tol:
            problems.append("tolerance shares exceed 1")
    return problems


def with_overrides(config: PlanConfig, **kw) -> PlanConfig:
    return dataclasses.replace(config, **{k: v for k, v in kw.items() if v is not None})
