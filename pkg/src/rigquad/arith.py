"""Multiprecision helpers shared by all modules.

Complex quantities are ``mpmath.mpc`` values and reals are ``mpmath.mpf``;
precision is taken from the active mpmath context, so callers wrap work in
``mp.workprec(bits)``.  Bound arithmetic is made conservative by nudging
results outward by a few hundred ulps with :func:`up` and :func:`down`.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import ParseError

MIN_PRECISION = 53
# Results of short operation chains are within a few ulps; 2^-(prec-8)
# relative slack covers chains of up to ~250 roundings.  Zero needs no
# slack: mpmath exponents are unbounded, so nothing nonzero rounds to 0.
_NUDGE_BITS = 8


def up(x):
    """Nudge a real bound toward +infinity."""
    x = mpf(x)
    if not mpmath.isfinite(x):
        return x
    return x + abs(x) * mpf(2) ** (_NUDGE_BITS - mp.prec)


def down(x):
    """Nudge a real bound toward -infinity."""
    x = mpf(x)
    if not mpmath.isfinite(x):
        return x
    return x - abs(x) * mpf(2) ** (_NUDGE_BITS - mp.prec)


def tolerance_bits(e_tol) -> int:
    """ceil(-log2 E_tol), at least 1."""
    e_tol = mpf(e_tol)
    if e_tol <= 0:
        raise ValueError("E_tol must be positive")
    with mp.workprec(64):
        return max(1, int(mpmath.ceil(-mpmath.log(e_tol, 2))))


def working_precision(e_tol, total_nodes: int = 1) -> int:
    """Guard-bit contract: ceil(-log2 E_tol) + 30 + ceil(log2 total_nodes)."""
    extra = max(0, math.ceil(math.log2(max(1, int(total_nodes)))))
    return max(MIN_PRECISION, tolerance_bits(e_tol) + 30 + extra)


_POW2 = re.compile(r"^\s*2\s*\^\s*\(?\s*([+-]?\d+)\s*\)?\s*$")


def parse_tolerance(text) -> mpf:
    """Parse ``"2^-100"`` exactly or a decimal string rounded downward."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = repr(text)
    if not isinstance(text, str):
        raise ParseError(f"tolerance must be a string, got {text!r}")
    m = _POW2.match(text)
    if m:
        return mpmath.ldexp(mpf(1), int(m.group(1)))
    frac = _parse_fraction(text)
    if frac <= 0:
        raise ParseError(f"tolerance must be positive: {text!r}")
    # at least 64 bits so that the downward nudge is negligible
    with mp.workprec(max(64, mp.prec)):
        val = down(mpf(frac.numerator) / frac.denominator)
    return val


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a real number: {text!r}") from exc


def parse_real(text) -> mpf:
    """Decimal or rational string to mpf at the current precision."""
    if isinstance(text, bool):
        raise ParseError(f"not a number: {text!r}")
    if isinstance(text, int):
        return mpf(text)
    if isinstance(text, float):
        return mpf(text)
    if not isinstance(text, str):
        raise ParseError(f"not a number: {text!r}")
    s = text.strip()
    if "/" in s:
        frac = _parse_fraction(s)
        return mpf(frac.numerator) / frac.denominator
    try:
        return mpf(s)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"not a real number: {text!r}") from exc


def _split_terms(s: str) -> list[str]:
    # split at +/- that do not belong to an exponent
    terms, begin = [], 0
    for i in range(1, len(s)):
        if s[i] in "+-" and s[i - 1] not in "eE":
            terms.append(s[begin:i])
            begin = i
    terms.append(s[begin:])
    return terms


def parse_complex(value) -> mpc:
    """Parse ``"0.3+0.4i"``, ``"-2i"``, ``"1/3"``, numbers or ``{"re", "im"}``."""
    if isinstance(value, dict):
        if not set(value) <= {"re", "im"}:
            raise ParseError(f"complex object needs re/im keys: {value!r}")
        return mpc(parse_real(value.get("re", "0")), parse_real(value.get("im", "0")))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return mpc(parse_real(value[0]), parse_real(value[1]))
    if not isinstance(value, str):
        return mpc(parse_real(value))
    s = value.replace(" ", "")
    if not s:
        raise ParseError("empty number")
    re_part, im_part = mpf(0), mpf(0)
    for term in _split_terms(s):
        if term[-1:] in ("i", "j"):
            coef = term[:-1].rstrip("*")
            if coef in ("", "+", "-"):
                coef += "1"
            im_part += parse_real(coef)
        else:
            re_part += parse_real(term)
    return mpc(re_part, im_part)


def decimal_digits(bits: int) -> int:
    return int(math.ceil(bits * math.log10(2))) + 1


def fmt_real(x, digits: int) -> str:
    return mpmath.nstr(mpf(x), digits, strip_zeros=False, min_fixed=-4, max_fixed=8)


def complex_json(z, digits: int) -> dict:
    z = mpc(z)
    return {"re": fmt_real(z.real, digits), "im": fmt_real(z.imag, digits)}


def to_complex128(z) -> complex:
    return complex(mpc(z))
