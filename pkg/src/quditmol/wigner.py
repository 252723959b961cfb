"""Wigner 3-j and 6-j symbols by exact big-integer arithmetic.

The Racah sum is evaluated with :class:`fractions.Fraction` over Python's
arbitrary-precision integers, so there is no cancellation error; the single
conversion to float happens at the very end.  Arguments are accepted as ints,
half-integer floats or :class:`~quditmol.halfint.HalfInt` and converted to
doubled integers internally.  Selection-rule violations return exactly 0.0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt, sqrt

from .halfint import twice


def _triangle_ok(tj1: int, tj2: int, tj3: int) -> bool:
    # all arguments are doubled
    if (tj1 + tj2 + tj3) % 2:
        return False
    return abs(tj1 - tj2) <= tj3 <= tj1 + tj2


def _fact2(tn: int) -> int:
    """Factorial of a doubled integer that must be a true even integer."""
    if tn % 2:
        raise ValueError("factorial of a half-integer requested")
    return factorial(tn // 2)


def _triangle_coeff(tj1: int, tj2: int, tj3: int) -> Fraction:
    return Fraction(
        _fact2(tj1 + tj2 - tj3) * _fact2(tj1 - tj2 + tj3) * _fact2(-tj1 + tj2 + tj3),
        _fact2(tj1 + tj2 + tj3 + 2),
    )


def _sqrt_fraction(f: Fraction) -> float:
    """Accurate sqrt of a non-negative Fraction with big components."""
    if f < 0:
        raise ValueError("negative radicand")
    num, den = f.numerator, f.denominator
    # exact integer square roots where possible, float fallback otherwise
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return rn / rd
    return sqrt(num / den) if num < 2**52 and den < 2**52 else float(f) ** 0.5


@lru_cache(maxsize=None)
def _wigner3j_t(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if not _triangle_ok(tj1, tj2, tj3):
        return 0.0
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if abs(tm) > tj or (tj - tm) % 2:
            return 0.0

    # Racah's single-sum formula.
    tmin = max(0, tj2 - tj3 - tm1, tj1 - tj3 + tm2)
    tmax = min(tj1 + tj2 - tj3, tj1 - tm1, tj2 + tm2)
    total = Fraction(0)
    for tt in range(tmin, tmax + 1, 2):
        denom = (
            _fact2(tt)
            * _fact2(tj1 + tj2 - tj3 - tt)
            * _fact2(tj1 - tm1 - tt)
            * _fact2(tj2 + tm2 - tt)
            * _fact2(tj3 - tj2 + tm1 + tt)
            * _fact2(tj3 - tj1 - tm2 + tt)
        )
        term = Fraction((-1) ** (tt // 2), denom)
        total += term
    if total == 0:
        return 0.0

    norm = _triangle_coeff(tj1, tj2, tj3) * Fraction(
        _fact2(tj1 + tm1) * _fact2(tj1 - tm1)
        * _fact2(tj2 + tm2) * _fact2(tj2 - tm2)
        * _fact2(tj3 + tm3) * _fact2(tj3 - tm3)
    )
    sign = -1 if ((tj1 - tj2 - tm3) // 2) % 2 else 1
    return sign * float(total) * _sqrt_fraction(norm)


@lru_cache(maxsize=None)
def _wigner6j_t(tj1: int, tj2: int, tj3: int, tj4: int, tj5: int, tj6: int) -> float:
    triads = (
        (tj1, tj2, tj3),
        (tj1, tj5, tj6),
        (tj4, tj2, tj6),
        (tj4, tj5, tj3),
    )
    for triad in triads:
        if not _triangle_ok(*triad):
            return 0.0

    tmin = max(
        tj1 + tj2 + tj3,
        tj1 + tj5 + tj6,
        tj4 + tj2 + tj6,
        tj4 + tj5 + tj3,
    )
    tmax = min(
        tj1 + tj2 + tj4 + tj5,
        tj2 + tj3 + tj5 + tj6,
        tj3 + tj1 + tj6 + tj4,
    )
    total = Fraction(0)
    for tt in range(tmin, tmax + 1, 2):
        num = _fact2(tt + 2)
        denom = (
            _fact2(tt - tj1 - tj2 - tj3)
            * _fact2(tt - tj1 - tj5 - tj6)
            * _fact2(tt - tj4 - tj2 - tj6)
            * _fact2(tt - tj4 - tj5 - tj3)
            * _fact2(tj1 + tj2 + tj4 + tj5 - tt)
            * _fact2(tj2 + tj3 + tj5 + tj6 - tt)
            * _fact2(tj3 + tj1 + tj6 + tj4 - tt)
        )
        total += Fraction((-1) ** (tt // 2) * num, denom)
    if total == 0:
        return 0.0

    norm = Fraction(1)
    for triad in triads:
        norm *= _triangle_coeff(*triad)
    return float(total) * _sqrt_fraction(norm)


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3-j symbol; 0.0 whenever a selection rule is violated."""
    return _wigner3j_t(twice(j1), twice(j2), twice(j3), twice(m1), twice(m2), twice(m3))


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6-j symbol {j1 j2 j3; j4 j5 j6}; 0.0 on violated triads."""
    return _wigner6j_t(twice(j1), twice(j2), twice(j3), twice(j4), twice(j5), twice(j6))
