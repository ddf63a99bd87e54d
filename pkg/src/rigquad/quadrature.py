"""Gauss-Legendre quadrature at arbitrary precision.

Nodes are refined from float64 Newton seeds by Halley steps on the Bonnet
three-term recurrence, run in fixed point on Python integers across all
positive nodes at once.  The order needed for a target tolerance follows
from the Chebyshev-type error bound on a Bernstein ellipse.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .algebraic import AlgebraicIntegrand, continue_branch
from .arith import up
from .errors import ConvergenceError


@dataclass(frozen=True)
class QuadratureScheme:
    order: int
    nodes: tuple
    weights: tuple
    precision: int

    def apply(self, values):
        """sum_i w_i values[i] over [-1, 1]."""
        with mp.workprec(self.precision):
            return mpmath.fsum(w * v for w, v in zip(self.weights, values))


@dataclass(frozen=True)
class Ellipse:
    """Bernstein ellipse L(z1, z2, r): |z - z1| + |z - z2| <= cosh(r) |z2 - z1|."""

    focus1: mpc
    focus2: mpc
    r: mpf

    def __post_init__(self):
        if self.focus1 == self.focus2:
            raise ValueError("foci must differ")
        if not self.r > 0:
            raise ValueError("r must be positive")

    def contains(self, z) -> bool:
        return (abs(z - self.focus1) + abs(z - self.focus2)
                <= mpmath.cosh(self.r) * abs(self.focus2 - self.focus1))

    def boundary_points(self, count: int) -> list:
        mid = (self.focus1 + self.focus2) / 2
        half = (self.focus2 - self.focus1) / 2
        a, b = mpmath.cosh(self.r), mpmath.sinh(self.r)
        return [mid + half * mpc(a * mpmath.cos(t), b * mpmath.sin(t))
                for t in (2 * mpmath.pi * k / count for k in range(count))]


def _float_seeds(N: int) -> np.ndarray:
    """Positive roots of P_N in float64, largest first."""
    i = np.arange(1, N // 2 + 1)
    x = np.cos(np.pi * (i - 0.25) / (N + 0.5))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(1, N):
            p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
        dp = N * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x = x - dx
        if np.all(np.abs(dx) < 1e-15):
            break
    return x


def _refine_fixed_point(seeds: np.ndarray, N: int, precision: int, P: int):
    """Halley iteration in fixed point with scale 2^P.

    Returns integer arrays (x, dP) with dP = P_N'(x), both scaled by 2^P.
    """
    one = 1 << P
    x = np.array([int(round(float(v) * 2.0 ** 60)) << (P - 60) for v in seeds], dtype=object)
    target = 1 << max(0, P - precision - 10)
    nn1 = N * (N + 1)
    for _ in range(12):
        p0 = np.full(len(x), one, dtype=object)
        p1 = x.copy()
        for k in range(1, N):
            p0, p1 = p1, ((2 * k + 1) * ((x * p1) >> P) - k * p0) // (k + 1)
        den = ((x * x) >> P) - one
        dp = ((N * (((x * p1) >> P) - p0)) << P) // den
        # P'' from the Legendre equation: (1 - x^2) P'' = 2x P' - N(N+1) P
        d2p = (((2 * ((x * dp) >> P)) - nn1 * p1) << P) // (-den)
        c = (p1 << P) // dp
        t = (((c * d2p) >> P) << P) // (2 * dp)
        step = (c << P) // (one - t)
        x = x - step
        if max(abs(int(s)) for s in step) < target:
            # P'(x_new) ~ P'(x) - step P''(x); the step is far below resolution
            dp = dp - ((step * d2p) >> P)
            return x, dp
    raise ConvergenceError("Legendre node refinement stagnated")


def legendre_scheme(N: int, precision: int) -> QuadratureScheme:
    """Order-N Gauss-Legendre nodes and weights to ``precision`` bits."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(precision):
        if N == 1:
            return QuadratureScheme(1, (mpf(0),), (mpf(2),), precision)
        half = N // 2
        seeds = _float_seeds(N)
        guard = 24 + 2 * N.bit_length()
        for extra in (0, 64):
            P = precision + guard + extra
            try:
                xs, dps = _refine_fixed_point(seeds, N, precision, P)
                break
            except ConvergenceError:
                if extra:
                    raise
        pos_nodes, pos_weights = [], []
        for xi, di in zip(xs, dps):
            x = mpf((int(xi), -P))
            d = mpf((int(di), -P))
            pos_nodes.append(x)
            pos_weights.append(2 / ((1 - x * x) * d * d))
        nodes = [-x for x in pos_nodes] + ([] if N % 2 == 0 else [mpf(0)])
        weights = list(pos_weights) + ([] if N % 2 == 0 else [None])
        if N % 2:
            weights[-1] = _center_weight(N, precision)
        nodes += list(reversed(pos_nodes))
        weights += list(reversed(pos_weights))
        assert len(nodes) == N and half == len(pos_nodes)
        return QuadratureScheme(N, tuple(nodes), tuple(weights), precision)


def _center_weight(N: int, precision: int):
    # at x = 0: P_N'(0) = N P_{N-1}(0), P_{N-1}(0) = (-1)^m (2m-1)!!/(2m)!!
    m = (N - 1) // 2
    num, den = 1, 1
    for j in range(1, m + 1):
        num *= 2 * j - 1
        den *= 2 * j
    d = mpf(N) * num / den
    return 2 / (d * d)


def _bound_constant(r):
    return mpmath.pi + mpf(64) / (15 * (mpmath.exp(2 * r) - 1))


def gl_error_bound(M, r, N: int):
    """(pi + 64 / (15 (e^(2r) - 1))) M e^(-2 N r), rounded up."""
    r, M = mpf(r), mpf(M)
    if not r > 0:
        raise ValueError("r must be positive")
    if M == 0:
        return mpf(0)
    with mp.workprec(max(mp.prec, 64)):
        return up(_bound_constant(r) * M * mpmath.exp(-2 * N * r))


def required_order(M, r, chord, e_tol) -> int:
    """Smallest N >= 1 with N >= (1/2r)[log C(r) + log M + log(chord/2) - log E_tol].

    C(r) = pi + 64 / (15 (e^(2r) - 1)); natural logs throughout.
    """
    M, r, chord, e_tol = mpf(M), mpf(r), mpf(chord), mpf(e_tol)
    if not (r > 0 and chord > 0 and e_tol > 0) or M < 0:
        raise ValueError("required_order needs r, chord, E_tol > 0 and M >= 0")
    if M == 0:
        return 1
    with mp.workprec(max(mp.prec, 64)):
        bracket = up(mpmath.log(_bound_constant(r)) + mpmath.log(M)
                     + mpmath.log(chord / 2) - mpmath.log(e_tol))
        if bracket <= 0:
            return 1
        return max(1, int(mpmath.ceil(up(bracket / (2 * r)))))


def _segment_points(z1, z2, scheme):
    mid, half = (z1 + z2) / 2, (z2 - z1) / 2
    return [mid + half * x for x in scheme.nodes]


def _integrate_tracked(integrand, z1, z2, scheme, start_value, tracker=None):
    """Quadrature over [z1, z2] plus the branch value carried to z2."""
    with mp.workprec(integrand.precision):
        z1, z2 = mpc(z1), mpc(z2)
        pts = _segment_points(z1, z2, scheme) + [z2]
        vals = continue_branch(integrand, pts, start=z1, start_value=start_value,
                               tracker=tracker)
        half = (z2 - z1) / 2
        total = mpmath.fsum(w * v for w, v in zip(scheme.weights, vals[:-1]))
        return half * total, vals[-1]


def integrate_segment(integrand: AlgebraicIntegrand, z1, z2, scheme: QuadratureScheme,
                      start_value=None):
    """((z2 - z1)/2) sum_i w_i g(mapped node i) on the continued branch.

    Without ``start_value`` the branch is first continued from the anchor
    to z1.
    """
    if start_value is None:
        start_value = continue_branch(integrand, [z1])[0]
    value, _ = _integrate_tracked(integrand, z1, z2, scheme, start_value)
    return value


@dataclass(frozen=True)
class HeuristicResult:
    value: mpc
    nodes_used: int
    error_estimate: mpf
    final_order: int


def heuristic_integrate(integrand: AlgebraicIntegrand, z1, z2, e_tol, n0: int = 8,
                        max_doublings: int = 14, start_value=None) -> HeuristicResult:
    """Order doubling until successive values differ by less than E_tol / 10.

    The returned error estimate is the last difference; it is not a bound.
    """
    e_tol = mpf(e_tol)
    if start_value is None:
        start_value = continue_branch(integrand, [z1])[0]
    prec = integrand.precision
    N = n0
    used = N
    prev, _ = _integrate_tracked(integrand, z1, z2, legendre_scheme(N, prec), start_value)
    for _ in range(max_doublings):
        N *= 2
        cur, _ = _integrate_tracked(integrand, z1, z2, legendre_scheme(N, prec), start_value)
        used += N
        diff = abs(cur - prev)
        if diff < e_tol / 10:
            return HeuristicResult(cur, used, diff, N)
        prev = cur
    raise ConvergenceError("heuristic did not converge")
