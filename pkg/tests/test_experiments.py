import math

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from oracles import iq_by_quadrature, pole_by_quadrature
from rigquad.experiments import (HeatmapConfig, bench_row, draw_instances, heatmap_rows,
                                 iq_integrand, iq_row, pole_closed_form, pole_row)
from rigquad.strategies import plan_main

E100 = mpf(2) ** -100


@pytest.mark.parametrize("z0", ["0.3+0.4j", "0.1-0.05j", "2+1j"])
@pytest.mark.parametrize("v", [0.5, 1])
def test_closed_form_matches_quadrature(z0, v):
    with mp.workdps(30):
        z0 = mpmath.mpmathify(complex(z0))
        assert abs(pole_closed_form(z0, v) - pole_by_quadrature(z0, v)) < 1e-25


def test_iq_branch_is_negative_imaginary():
    with mp.workprec(120):
        I = iq_integrand(mpf("0.5"), 120)
        assert I.branch_value.imag < 0 and abs(I.branch_value.real) < mpf(2) ** -100


def test_heatmap_small_grid():
    rows = heatmap_rows(HeatmapConfig(grid=4))
    assert len(rows) == 16
    bottom = [r for r in rows if r[1] == "0.1"]
    assert all(n1 <= n2 for _, _, n1, n2 in bottom)


def test_heatmap_far_point():
    rows = heatmap_rows(HeatmapConfig(grid=2, lo=0.5, hi=0.9))
    n1, n2 = next((r[2], r[3]) for r in rows if r[:2] == ("0.5", "0.9"))
    assert n1 / 3 <= n2 <= 3 * n1


def test_heatmap_column_decreasing_in_y():
    rows = heatmap_rows(HeatmapConfig(grid=8))
    col = [r[3] for r in rows if r[0] == "0.1"]
    assert all(a > b for a, b in zip(col, col[1:]))


def test_heatmap_proxy_mode_any_exponent():
    from fractions import Fraction
    rows = heatmap_rows(HeatmapConfig(v=Fraction(1, 3), grid=2, bound_mode="proxy"))
    assert all(r[2] > 0 and r[3] > 0 for r in rows)


def test_iq_lemma_vs_proxy_and_value():
    q, n1l, n1p, n2l, n2p, value = iq_row(mpf("0.5"), E100)
    assert n1p / 2 <= n1l <= 2 * n1p
    assert abs(value - iq_by_quadrature("0.5")) < mpf(10) ** -35


def test_iq_trends():
    e = E100
    n = {q: iq_row(mpf(q), e, execute_values=False) for q in ("0.02", "0.01", "0.005")}
    for a, b in (("0.02", "0.01"), ("0.01", "0.005")):
        assert 1.6 <= n[b][3] / n[a][3] <= 2.5
        assert n[b][1] / n[a][1] <= 1.4


def test_pole_v1_sqrt_slope():
    qs = [mpf(10) ** -k for k in range(1, 5)]
    rows = [pole_row(1, q, E100) for q in qs]
    xs = [float(mpmath.log(1 / q)) for q in qs]
    ys = [math.sqrt(r[1]) for r in rows]
    xm, ym = sum(xs) / 4, sum(ys) / 4
    slope = sum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / sum((x - xm) ** 2 for x in xs)
    assert 0.5 <= slope <= 2


POLE_QS = [mpf(10) ** -k for k in range(1, 5)]


@pytest.fixture(scope="module")
def pole_half_n2():
    return [pole_row(0.5, q, E100)[2] for q in POLE_QS]


@pytest.mark.xfail(strict=True, reason="at E = 2^-100 the -log E term dominates log(1/q) "
                   "over this range, so q N2 / log(1/q) drifts by about 3.5x")
def test_pole_half_n2_over_log_only(pole_half_n2):
    scaled = [n * q / mpmath.log(1 / q) for n, q in zip(pole_half_n2, POLE_QS)]
    assert max(scaled) / min(scaled) < 3


def test_pole_half_n2_scaling(pole_half_n2):
    # N2 ~ (log(1/q^v) + log(1/E)) / r with r ~ q, and a log(1/q) from M
    scaled = [n * q / (mpf(3) / 2 * mpmath.log(1 / q) - mpmath.log(E100))
              for n, q in zip(pole_half_n2, POLE_QS)]
    assert max(scaled) / min(scaled) < 1.2


@pytest.mark.xfail(strict=True, reason="bisection accepts [-1,0] and [0,1] with a "
                   "marginal disk (0.9 rho barely above h), so N1 = 106 > N2 = 93")
def test_pole_moderate_q_main_not_worse():
    q, n1, n2, kept = pole_row(0.5, mpf("0.5"), E100)
    assert n1 <= n2


def test_pole_moderate_q_counts():
    q, n1, n2, kept = pole_row(0.5, mpf("0.5"), E100)
    assert n1 <= 2 * n2 and kept == n1


def test_pole_dropping_diagnostic_kicks_in():
    # coarse tolerance: the segments hugging the pole integrate to below their share
    q, n1, n2, kept = pole_row(0.5, mpf(10) ** -12, mpf(2) ** -10, precision=256)
    assert 0 < kept < n1


def test_bench_deterministic_and_consistent():
    a = draw_instances(3, 7)
    b = draw_instances(3, 7)
    assert a == b
    e = mpf(2) ** -60
    for inst in a:
        row = bench_row(inst, e)
        vm, vr, vh = row[8]
        assert abs(vm - vr) <= 2 * e
        assert abs(vm - vh) <= 1000 * e
        assert row[7]


def test_heuristic_costs_more_near_pole():
    from rigquad.quadrature import heuristic_integrate
    from rigquad.experiments import pole_integrand
    e = mpf(2) ** -30
    I = pole_integrand(mpc(0, "0.05"), 0.5, 80)
    res = heuristic_integrate(I, -1, 1, e)
    assert res.nodes_used > 5 * plan_main(I, -1, 1, e).total_N
