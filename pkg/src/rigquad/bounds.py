"""Upper bounds for |g| and for its variation over disks.

A Fujiwara root bound applied to f(z, .) with coefficient bounds that hold
uniformly on a disk bounds every branch there; Cauchy's form of the Taylor
remainder turns that into a bound on |g(z) - g(z_0)| on a smaller disk.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .algebraic import (AlgebraicIntegrand, BivariateDefiningPolynomial,
                        UnivariatePolynomial, branch_derivative)
from .arith import down, up
from .errors import GeometryError


@dataclass(frozen=True)
class Disk:
    center: mpc
    radius: mpf

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disk radius must be nonnegative")

    def contains(self, z) -> bool:
        return abs(z - self.center) <= self.radius


@dataclass(frozen=True)
class DiskBoundCertificate:
    disk: Disk
    taylor_radius: mpf
    fujiwara_bound: mpf
    g_at_center: mpc
    dg_at_center: mpc
    variation_bound: mpf
    absolute_bound: mpf


def fujiwara_root_bound(p: UnivariatePolynomial):
    """2 max_k |a_k / a_0|^(1/k) with a_0 the leading coefficient.

    Every root has modulus strictly below the result, or the result is 0 and
    all roots vanish.
    """
    if p.is_zero() or p.leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    desc = list(reversed(p.coeffs))
    a0 = abs(desc[0])
    best = mpf(0)
    for k, c in enumerate(desc[1:], start=1):
        if c != 0:
            best = max(best, (abs(c) / a0) ** (mpf(1) / k))
    return up(2 * best)


def uniform_coefficient_bounds(f: BivariateDefiningPolynomial, a0_roots, z0, delta,
                               a0_radii=None):
    """(A_0, [A_1..A_n]): |a_0| >= A_0 and |a_i| <= A_i on D(z0, delta).

    ``a0_radii`` are optional inclusion radii of the approximate zeros of
    a_0; they are subtracted from the distances.
    """
    z0, delta = mpc(z0), mpf(delta)
    a0 = f.rows[0]
    if len(a0_roots) != a0.degree:
        raise ValueError("need all roots of a_0")
    radii = a0_radii or [mpf(0)] * len(a0_roots)
    A0 = abs(a0.leading)
    for alpha, e in zip(a0_roots, radii):
        gap = abs(z0 - alpha) - e - delta
        if gap <= 0:
            raise GeometryError("disk touches zero of a_0")
        A0 *= gap
    A0 = down(A0)
    if A0 <= 0:
        raise GeometryError("disk touches zero of a_0")
    reach = up(abs(z0) + delta)
    A = []
    for row in f.rows[1:]:
        acc = mpf(0)
        for c in reversed(row.coeffs):
            acc = acc * reach + abs(c)
        A.append(up(acc))
    return A0, A


def fujiwara_uniform_bound(f: BivariateDefiningPolynomial, a0_roots, z0, delta,
                           a0_radii=None):
    """Bound on |g(z)| over D(z0, delta) valid for every branch."""
    A0, A = uniform_coefficient_bounds(f, a0_roots, z0, delta, a0_radii)
    best = mpf(0)
    for k, Ak in enumerate(A, start=1):
        if Ak > 0:
            best = max(best, (Ak / A0) ** (mpf(1) / k))
    return up(2 * best)


def taylor_variation_bound(g_at_center, dg_at_center, fujiwara, rho, delta):
    """delta |g'(z0)| + delta^2 M / (rho (rho - delta)), rounded up."""
    rho, delta = mpf(rho), mpf(delta)
    if delta >= rho:
        raise ValueError("need delta < rho")
    if delta < 0:
        raise ValueError("need delta >= 0")
    if delta == 0:
        return mpf(0)
    gap = down(rho - delta)
    return up(delta * abs(dg_at_center) + delta ** 2 * mpf(fujiwara) / (down(rho) * gap))


def disk_bound(integrand: AlgebraicIntegrand, center, delta, g_at_center,
               taylor_ratio=0.5) -> DiskBoundCertificate:
    """Certified bounds for the tracked branch on D(center, delta).

    The Taylor radius is placed a fraction ``taylor_ratio`` of the way from
    delta to the nearest critical point (the midpoint by default).  With no
    critical points at all it is set to 2 delta.
    """
    with mp.workprec(integrand.precision):
        center, delta = mpc(center), mpf(delta)
        g0 = mpc(g_at_center)
        rho_min = integrand.critical.distance(center)
        if not delta < rho_min:
            raise GeometryError("disk contains critical point")
        if mpmath.isinf(rho_min):
            rho = 2 * delta if delta > 0 else mpf(1)
        else:
            rho = delta + mpf(taylor_ratio) * (rho_min - delta)
        a0c = integrand.a0_critical
        m_tilde = fujiwara_uniform_bound(integrand.f, a0c.points, center, rho, a0c.radii)
        dg = branch_derivative(integrand.f, center, g0)
        variation = taylor_variation_bound(g0, dg, m_tilde, rho, delta)
        return DiskBoundCertificate(
            disk=Disk(center, delta),
            taylor_radius=rho,
            fujiwara_bound=m_tilde,
            g_at_center=g0,
            dg_at_center=dg,
            variation_bound=variation,
            absolute_bound=up(abs(g0) + variation),
        )


def proxy_bound(scale, exponent, nearest_critical, center, delta):
    """Model bound scale * (|center - alpha| - delta)^(-exponent)."""
    dist = abs(mpc(center) - mpc(nearest_critical))
    delta = mpf(delta)
    if not delta < dist:
        raise GeometryError("disk contains the critical point")
    return up(mpf(scale) * (dist - delta) ** (-mpf(exponent)))
