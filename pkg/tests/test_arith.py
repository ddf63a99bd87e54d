import pytest
from mpmath import mp, mpc, mpf

from rigquad.arith import (complex_json, down, fmt_real, parse_complex, parse_real,
                           parse_tolerance, tolerance_bits, up, working_precision)
from rigquad.errors import ParseError


def test_power_of_two_tolerance_is_exact():
    assert parse_tolerance("2^-100") == mpf(2) ** -100
    assert parse_tolerance(" 2^(-53) ") == mpf(2) ** -53


def test_decimal_tolerance_rounds_down():
    with mp.workprec(200):
        t = parse_tolerance("1e-30")
        assert t <= mpf(10) ** -30
        assert t > mpf(10) ** -30 * (1 - mpf(2) ** -50)


@pytest.mark.parametrize("bad", ["", "abc", "-1e-3", "0", "2^x"])
def test_bad_tolerance(bad):
    with pytest.raises(ParseError):
        parse_tolerance(bad)


def test_tolerance_bits_and_precision():
    assert tolerance_bits(mpf(2) ** -100) == 100
    assert working_precision(mpf(2) ** -100) == 130
    assert working_precision(mpf(2) ** -100, 106) == 137
    assert working_precision(mpf(2) ** -4) == 53


@pytest.mark.parametrize("text,expected", [
    ("0.3+0.4i", ("0.3", "0.4")),
    ("-2i", ("0", "-2")),
    ("i", ("0", "1")),
    ("-1", ("-1", "0")),
    ("1e-3-1e-2i", ("1e-3", "-1e-2")),
    ({"re": "1", "im": "-0.5"}, ("1", "-0.5")),
    (["2", "3"], ("2", "3")),
    (7, ("7", "0")),
])
def test_parse_complex(text, expected):
    with mp.workprec(100):
        assert parse_complex(text) == mpc(mpf(expected[0]), mpf(expected[1]))


def test_parse_complex_rational():
    with mp.workprec(100):
        assert parse_complex("1/3") == mpf(1) / 3


@pytest.mark.parametrize("bad", ["x", "1+", {"re": "1", "bad": 2}, True, None])
def test_parse_complex_rejects(bad):
    with pytest.raises(ParseError):
        parse_complex(bad)


def test_parse_real_rational():
    with mp.workprec(100):
        assert parse_real("-3/4") == mpf(-3) / 4


def test_nudges_are_outward():
    with mp.workprec(80):
        for x in [mpf(1), mpf(-3), mpf("1e-30")]:
            assert down(x) < x < up(x)
        assert up(0) == down(0) == 0


def test_formatting():
    assert fmt_real(mpf("2.5"), 5) == "2.5000"
    doc = complex_json(mpc(1, -2), 3)
    assert doc == {"re": "1.00", "im": "-2.00"}
