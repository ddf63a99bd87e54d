"""Algebraic integrands g(z) defined implicitly by f(z, g) = 0.

The defining polynomial is stored row by row, ``f = sum_i a_i(z) g^(n-i)``,
each row an ascending coefficient list in z.  A branch of g is pinned down by
an anchor point and a branch value there, and evaluated elsewhere by
numerical continuation (tangent predictor, Newton corrector, step halving).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .arith import down, up
from .errors import ContinuationError, GeometryError, RootFindingError

_ABERTH_GUARD = 20


@dataclass(frozen=True)
class UnivariatePolynomial:
    """Complex polynomial with coefficients in ascending degree order."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [mpc(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        acc = mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "UnivariatePolynomial":
        return UnivariatePolynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def coefficient_scale(self):
        return max((abs(c) for c in self.coeffs), default=mpf(0))


@dataclass(frozen=True)
class BivariateDefiningPolynomial:
    """f(z, g) = a_0(z) g^n + a_1(z) g^(n-1) + ... + a_n(z)."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(r if isinstance(r, UnivariatePolynomial) else UnivariatePolynomial(r)
                     for r in self.rows)
        if len(rows) < 2:
            raise ValueError("defining polynomial needs degree n >= 1 in g")
        if rows[0].is_zero():
            raise ValueError("leading row a_0 must not be the zero polynomial")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "BivariateDefiningPolynomial":
        return cls(tuple(UnivariatePolynomial(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    @property
    def max_z_degree(self) -> int:
        return max(r.degree for r in self.rows)

    @cached_property
    def z_derivative_rows(self) -> tuple:
        return tuple(r.derivative() for r in self.rows)

    def coefficients_at(self, z) -> list:
        """[a_0(z), ..., a_n(z)], i.e. the g-polynomial in descending order."""
        return [r(z) for r in self.rows]

    def g_polynomial(self, z) -> UnivariatePolynomial:
        return UnivariatePolynomial(reversed(self.coefficients_at(z)))

    def at_precision(self) -> "BivariateDefiningPolynomial":
        """Copy with coefficients rounded to the active precision."""
        return BivariateDefiningPolynomial.from_rows([r.coeffs for r in self.rows])


def _horner_with_derivative(desc, g):
    p, dp = desc[0], mpc(0)
    for c in desc[1:]:
        dp = dp * g + p
        p = p * g + c
    return p, dp


def _horner(desc, g):
    p = desc[0]
    for c in desc[1:]:
        p = p * g + c
    return p


def eval_f(f: BivariateDefiningPolynomial, z, g):
    return _horner(f.coefficients_at(mpc(z)), mpc(g))


def branch_derivative(f: BivariateDefiningPolynomial, z, g):
    """g'(z) = -f_z / f_g by implicit differentiation."""
    z, g = mpc(z), mpc(g)
    vals = f.coefficients_at(z)
    _, fg = _horner_with_derivative(vals, g)
    fz = _horner([r(z) for r in f.z_derivative_rows], g)
    n = f.n
    scale = sum(abs(v) * (n - i) * max(1, abs(g)) ** (n - i - 1)
                for i, v in enumerate(vals[:-1]))
    if fg == 0 or abs(fg) <= scale * mpf(2) ** (30 - mp.prec):
        raise GeometryError(f"critical point encountered at z={mpmath.nstr(z, 8)}")
    return -fz / fg


def _fujiwara_radius(desc):
    # desc[0] is the leading coefficient
    a0 = abs(desc[0])
    best = mpf(0)
    for k, c in enumerate(desc[1:], start=1):
        if c != 0:
            best = max(best, (abs(c) / a0) ** (mpf(1) / k))
    return 2 * best


def poly_roots(p: UnivariatePolynomial, precision: int | None = None,
               maxiter: int = 1000) -> list:
    """All roots of ``p`` (with multiplicity) by Aberth-Ehrlich iteration.

    Starting values sit on a rotated circle whose radius is half the
    Fujiwara bound.  Iteration runs with 20 guard bits and stops once every
    correction or every residual is at the noise level.  Clusters of roots
    are returned as-is.
    """
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    prec = precision or mp.prec
    with mp.workprec(prec + _ABERTH_GUARD):
        cs = [mpc(c) for c in p.coeffs]
        zeros = 0
        while cs[zeros] == 0:
            zeros += 1
        cs = cs[zeros:]
        n = len(cs) - 1
        roots = [mpc(0)] * zeros
        if n >= 1:
            desc = [c / cs[-1] for c in reversed(cs)]
            roots += _aberth(desc, prec, maxiter)
    with mp.workprec(prec):
        roots = [+r for r in roots]
        _check_residuals(p, roots, prec)
    return roots


def _aberth(desc, prec, maxiter):
    n = len(desc) - 1
    if n == 1:
        return [-desc[1]]
    radius = _fujiwara_radius(desc) / 2
    if radius == 0:
        return [mpc(0)] * n
    z = [radius * mpmath.expjpi(mpf(2 * k) / n + mpf(0.4) / n) for k in range(n)]
    eps = mpf(2) ** -(prec + 4)
    res_eps = mpf(2) ** -(prec + 10)
    scale = max(abs(c) for c in desc)
    for _ in range(maxiter):
        moving = False
        small_residual = True
        for i in range(n):
            zi = z[i]
            pv, dpv = _horner_with_derivative(desc, zi)
            if pv == 0:
                continue
            if abs(pv) > res_eps * scale * max(1, abs(zi)) ** n:
                small_residual = False
            if dpv == 0:
                z[i] = zi + eps * (1 + abs(zi)) * mpmath.expjpi(mpf(i) / n)
                moving = True
                continue
            ratio = pv / dpv
            s = mpc(0)
            for j in range(n):
                if j != i:
                    d = zi - z[j]
                    if d != 0:
                        s += 1 / d
            w = ratio / (1 - ratio * s)
            z[i] = zi - w
            if abs(w) > eps * max(1, abs(zi)):
                moving = True
        if not moving or small_residual:
            return z
    raise RootFindingError(
        f"Aberth iteration did not converge in {maxiter} sweeps; raise precision")


def _check_residuals(p, roots, prec):
    tol = mpf(2) ** -(prec - 20) * p.coefficient_scale()
    for r in roots:
        if abs(p(r)) > tol * max(1, abs(r)) ** p.degree:
            raise RootFindingError(
                f"root {mpmath.nstr(r, 8)} fails the residual bound; raise precision")


def root_inclusion_radii(p: UnivariatePolynomial, roots: Sequence) -> list:
    """Radii e_i such that every true root lies within e_i of some roots[i].

    Uses the Weierstrass-correction inclusion: disks of radius
    n |p(z_i)| / |lead * prod_{j != i}(z_i - z_j)| contain all roots, a
    connected union of m disks containing exactly m of them.  Overlapping
    disks therefore get the summed diameter of their component.
    """
    n = len(roots)
    if n == 0:
        return []
    roots, spread = _spread_duplicates(roots)
    lead = abs(p.leading)
    radii = []
    for i, zi in enumerate(roots):
        prod = mpf(1)
        for j, zj in enumerate(roots):
            if j != i:
                prod *= abs(zi - zj)
        if prod == 0:
            radii.append(mpmath.inf)
            continue
        # evaluation error allowance
        noise = mpf(2) ** (4 - mp.prec) * n * sum(
            abs(c) * max(1, abs(zi)) ** k for k, c in enumerate(p.coeffs))
        radii.append(up(n * (abs(p(zi)) + noise) / (lead * prod)))
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(radii)
    for members in groups.values():
        if len(members) > 1:
            diameter = up(2 * sum(radii[m] for m in members))
            for m in members:
                out[m] = diameter
    return [up(e + d) for e, d in zip(out, spread)]


def _spread_duplicates(roots):
    """Move exactly repeated approximations apart onto a small circle.

    The inclusion radii hold for any set of distinct points, so the moved
    points are used and the shift is added back to the radii afterwards.
    """
    roots = [mpc(z) for z in roots]
    groups: dict = {}
    for i, z in enumerate(roots):
        groups.setdefault((z.real, z.imag), []).append(i)
    spread = [mpf(0)] * len(roots)
    for members in groups.values():
        m = len(members)
        if m < 2:
            continue
        zc = roots[members[0]]
        s = mpf(2) ** (-(mp.prec // (2 * m))) * max(1, abs(zc))
        for k, i in enumerate(members):
            roots[i] = zc + s * mpmath.expjpi(mpf(2 * k) / m)
            spread[i] = up(s)
    return roots, spread


def _det(rows):
    """Determinant by Gaussian elimination with partial pivoting."""
    a = [list(r) for r in rows]
    size = len(a)
    det = mpc(1)
    for col in range(size):
        piv = max(range(col, size), key=lambda i: abs(a[i][col]))
        if a[piv][col] == 0:
            return mpc(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for i in range(col + 1, size):
            factor = a[i][col] / p
            if factor != 0:
                ai, ac = a[i], a[col]
                for j in range(col + 1, size):
                    ai[j] -= factor * ac[j]
    return det


def _sylvester_det(a_desc, b_desc):
    m, k = len(a_desc) - 1, len(b_desc) - 1
    size = m + k
    mat = [[mpc(0)] * size for _ in range(size)]
    for i in range(k):
        for j, c in enumerate(a_desc):
            mat[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(b_desc):
            mat[k + i][i + j] = c
    return _det(mat)


def discriminant_polynomial(f: BivariateDefiningPolynomial) -> UnivariatePolynomial:
    """Res_g(f, df/dg) as a polynomial in z.

    Its zeros contain the branch points of f and the zeros of a_0.  The
    polynomial is recovered by evaluating Sylvester determinants on the unit
    circle and interpolating with an inverse DFT, at roughly twice the
    working precision; top coefficients below the noise floor are dropped.
    """
    n = f.n
    if n == 1:
        return f.rows[0]
    prec = mp.prec
    deg_bound = (2 * n - 1) * f.max_z_degree
    if deg_bound == 0:
        return UnivariatePolynomial([1])
    samples = deg_bound + 1
    with mp.workprec(2 * prec + 40):
        values = []
        for k in range(samples):
            z = mpmath.expjpi(mpf(2 * k) / samples)
            a = f.coefficients_at(z)
            b = [(n - i) * c for i, c in enumerate(a[:-1])]
            values.append(_sylvester_det(a, b))
        coeffs = []
        for j in range(samples):
            acc = mpc(0)
            for k, v in enumerate(values):
                acc += v * mpmath.expjpi(mpf(-2 * j * k) / samples)
            coeffs.append(acc / samples)
        scale = max(abs(c) for c in coeffs)
        if scale == 0:
            raise ValueError("f has a repeated factor in g (zero discriminant)")
        floor = scale * mpf(2) ** -(prec + 10)
        while coeffs and abs(coeffs[-1]) <= floor:
            coeffs.pop()
        coeffs = [c if abs(c) > floor else mpc(0) for c in coeffs]
    with mp.workprec(prec):
        return UnivariatePolynomial(coeffs)


def _segment_point_distance(z1, z2, a):
    d = z2 - z1
    dd = abs(d) ** 2
    if dd == 0:
        return abs(a - z1)
    t = ((a - z1) * mpmath.conj(d)).real / dd
    t = min(max(t, mpf(0)), mpf(1))
    return abs(a - (z1 + t * d))


@dataclass(frozen=True)
class CriticalSet:
    """Approximate critical points with certified inclusion radii."""

    points: tuple = ()
    radii: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(mpc(p) for p in self.points))
        radii = self.radii or (mpf(0),) * len(self.points)
        object.__setattr__(self, "radii", tuple(mpf(r) for r in radii))

    def __len__(self):
        return len(self.points)

    def distance(self, z):
        """Lower bound on the distance from z to the nearest critical point."""
        if not self.points:
            return mpmath.inf
        return down(min(abs(z - p) - e for p, e in zip(self.points, self.radii)))

    def nearest(self, z):
        if not self.points:
            return None
        return min(self.points, key=lambda p: abs(z - p))

    def segment_distance(self, z1, z2):
        if not self.points:
            return mpmath.inf
        return down(min(_segment_point_distance(z1, z2, p) - e
                        for p, e in zip(self.points, self.radii)))

    def mapped(self, mid, half) -> "CriticalSet":
        """Image under z -> (z - mid) / half."""
        s = abs(half)
        return CriticalSet(tuple((p - mid) / half for p in self.points),
                           tuple(up(e / s) for e in self.radii))


@dataclass(frozen=True)
class AlgebraicIntegrand:
    """A defining polynomial together with a selected branch.

    Use :meth:`build`, which computes the critical points (zeros of a_0 and
    of the discriminant) and snaps ``branch_value`` to the nearest root of
    f(anchor, .).
    """

    f: BivariateDefiningPolynomial
    anchor: mpc
    branch_value: mpc
    critical: CriticalSet
    a0_critical: CriticalSet
    precision: int

    @classmethod
    def build(cls, f, anchor, branch_value, precision: int) -> "AlgebraicIntegrand":
        if not isinstance(f, BivariateDefiningPolynomial):
            f = BivariateDefiningPolynomial.from_rows(f)
        with mp.workprec(precision):
            f = f.at_precision()
            anchor, guess = mpc(anchor), mpc(branch_value)
            a0 = f.rows[0]
            if a0.degree >= 1:
                r0 = poly_roots(a0, precision)
                a0_crit = CriticalSet(r0, root_inclusion_radii(a0, r0))
            else:
                a0_crit = CriticalSet()
            disc = discriminant_polynomial(f)
            if disc.degree >= 1:
                rd = poly_roots(disc, precision)
                disc_crit = CriticalSet(rd, root_inclusion_radii(disc, rd))
            else:
                disc_crit = CriticalSet()
            critical = CriticalSet(a0_crit.points + disc_crit.points,
                                   a0_crit.radii + disc_crit.radii)
            clearance = mpf(2) ** (-(precision // 2))
            if critical.distance(anchor) <= clearance:
                raise GeometryError("anchor coincides with a critical point")
            value = _select_branch(f, anchor, guess, precision)
        return cls(f, anchor, value, critical, a0_crit, precision)

    def with_precision(self, precision: int) -> "AlgebraicIntegrand":
        if precision == self.precision:
            return self
        return AlgebraicIntegrand.build(self.f, self.anchor, self.branch_value, precision)

    @property
    def critical_points(self) -> tuple:
        return self.critical.points

    @property
    def continuation_clearance(self):
        return mpf(2) ** (-(self.precision // 2))

    def residual_tolerance(self, z, g):
        """Default branch residual tolerance: 2^-(p-30) times the coefficient scale."""
        vals = self.f.coefficients_at(z)
        n = self.f.n
        scale = sum(abs(v) * max(1, abs(g)) ** (n - i) for i, v in enumerate(vals))
        return mpf(2) ** (30 - self.precision) * scale


def _select_branch(f, anchor, guess, precision):
    roots = poly_roots(f.g_polynomial(anchor), precision)
    if len(roots) != f.n:
        raise GeometryError("a_0 vanishes at the anchor")
    dists = sorted((abs(r - guess), i) for i, r in enumerate(roots))
    if len(dists) > 1 and not dists[0][0] < dists[1][0]:
        raise ValueError("branch value is equidistant from two roots of f(anchor, .)")
    return roots[dists[0][1]]


class _Tracker:
    """Path tracker for one branch; remembers the last accepted step length."""

    def __init__(self, integrand: AlgebraicIntegrand):
        self.integrand = integrand
        self.f = integrand.f
        self.prec = integrand.precision
        self.eps = mpf(2) ** -self.prec
        self.sqrt_eps = mpf(2) ** -(self.prec // 2)
        self.last = None

    def walk(self, z, g, t):
        dist = abs(t - z)
        step = dist if self.last is None else min(dist, 2 * self.last)
        min_step = self.integrand.continuation_clearance * (1 + abs(t))
        dg = branch_derivative(self.f, z, g)
        while True:
            left = abs(t - z)
            if step >= left:
                nxt, step = t, left
            else:
                nxt = z + (t - z) * (step / left)
            ok, gn = self._correct(nxt, g + (nxt - z) * dg)
            if ok:
                z, g = nxt, gn
                self.last = step
                if z == t:
                    return g
                dg = branch_derivative(self.f, z, g)
                step = min(2 * step, abs(t - z))
            else:
                step /= 2
                if step < min_step:
                    raise ContinuationError(
                        f"branch tracking failed near z={mpmath.nstr(z, 10)}")

    def _isolation(self, vals, pred):
        if self.f.n == 1:
            return mpmath.inf
        coeffs = [complex(v) for v in vals]
        if coeffs[0] != 0 and all(np.isfinite(c) for c in coeffs):
            roots = np.roots(coeffs)
        else:
            poly = UnivariatePolynomial(reversed(vals))
            if poly.degree < 1:
                return mpf(0)
            roots = np.array([complex(r) for r in poly_roots(poly, 64)])
        d = np.abs(roots - complex(pred))
        if len(d) < 2:
            return mpmath.inf
        d = np.delete(d, int(np.argmin(d)))
        return mpf(float(d.min()))

    def _correct(self, t, pred):
        vals = self.f.coefficients_at(t)
        iso = self._isolation(vals, pred)
        g = pred
        corr = []
        for _ in range(60):
            fv, fg = _horner_with_derivative(vals, g)
            if fg == 0:
                return False, None
            c = fv / fg
            g = g - c
            a = abs(c)
            corr.append(a)
            gscale = max(1, abs(g))
            if a <= 64 * self.eps * gscale:
                break
            if len(corr) in (2, 3) and a > corr[-2] / 2:
                return False, None
            if len(corr) > 3 and a >= corr[-2]:
                if a <= self.sqrt_eps * gscale:
                    break
                return False, None
        else:
            return False, None
        if not abs(g - pred) < iso / 4:
            return False, None
        n = self.f.n
        scale = sum(abs(v) * max(1, abs(g)) ** (n - i) for i, v in enumerate(vals))
        if abs(_horner(vals, g)) > mpf(2) ** (20 - self.prec) * scale:
            return False, None
        return True, g


def continue_branch(integrand: AlgebraicIntegrand, targets: Sequence, start=None,
                    start_value=None, tracker: _Tracker | None = None) -> list:
    """Values of the tracked branch at ``targets``, visited in order.

    Continuation starts at the anchor (or at ``start`` with ``start_value``)
    and follows straight legs between consecutive targets.  Every leg must
    keep the continuation clearance from all critical points.
    """
    with mp.workprec(integrand.precision):
        z = integrand.anchor if start is None else mpc(start)
        g = integrand.branch_value if start_value is None else mpc(start_value)
        tracker = tracker or _Tracker(integrand)
        clearance = integrand.continuation_clearance
        out = []
        for t in targets:
            t = mpc(t)
            if t != z:
                if integrand.critical.segment_distance(z, t) <= clearance:
                    raise GeometryError(
                        f"critical point within clearance of the leg ending at "
                        f"{mpmath.nstr(t, 8)}")
                g = tracker.walk(z, g, t)
                z = t
            out.append(g)
        return out
