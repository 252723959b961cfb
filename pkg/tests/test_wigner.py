"""Angular-momentum symbols against the sympy oracle plus identities."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational, S
from sympy.physics.wigner import wigner_3j, wigner_6j

from quditmol.wigner import wigner3j, wigner6j

halfints = st.integers(min_value=0, max_value=8).map(lambda t: Fraction(t, 2))


def _oracle3j(j1, j2, j3, m1, m2, m3):
    try:
        return float(wigner_3j(Rational(j1), Rational(j2), Rational(j3),
                               Rational(m1), Rational(m2), Rational(m3)))
    except ValueError:
        return 0.0


def _oracle6j(*js):
    try:
        return float(wigner_6j(*[Rational(j) for j in js]))
    except ValueError:
        return 0.0


def test_known_3j_values():
    assert wigner3j(1, 1, 2, 1, -1, 0) == pytest.approx(1 / math.sqrt(30))
    assert wigner3j(Fraction(1, 2), Fraction(1, 2), 1,
                    Fraction(1, 2), Fraction(-1, 2), 0) == \
        pytest.approx(1 / math.sqrt(6))
    # quadrupole geometry
    assert wigner3j(1, 2, 1, -1, 0, 1) == pytest.approx(1 / math.sqrt(30))
    assert wigner3j(1, 1, 1, 0, 0, 0) == 0.0


def test_known_6j_values():
    assert wigner6j(1, 1, 2, 1, 1, 2) == pytest.approx(_oracle6j(1, 1, 2,
                                                                 1, 1, 2))
    assert wigner6j(2, 1, 1, 1, 1, 1) == pytest.approx(1 / 6)


@settings(max_examples=300, deadline=None)
@given(halfints, halfints, halfints,
       st.integers(-8, 8), st.integers(-8, 8))
def test_3j_matches_sympy(j1, j2, j3, tm1, tm2):
    m1, m2 = Fraction(tm1, 2), Fraction(tm2, 2)
    m3 = -m1 - m2
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return
    if (j1 + m1).denominator != 1 or (j2 + m2).denominator != 1 \
            or (j3 + m3).denominator != 1:
        return
    got = wigner3j(j1, j2, j3, m1, m2, m3)
    assert got == pytest.approx(_oracle3j(j1, j2, j3, m1, m2, m3), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(halfints, halfints, halfints, halfints, halfints, halfints)
def test_6j_matches_sympy(j1, j2, j3, j4, j5, j6):
    got = wigner6j(j1, j2, j3, j4, j5, j6)
    assert got == pytest.approx(_oracle6j(j1, j2, j3, j4, j5, j6), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(halfints, halfints, st.integers(-8, 8), st.integers(-8, 8))
def test_3j_orthogonality(j1, j2, tm1, tm2):
    """Sum over j3 of (2 j3 + 1) 3j^2 at fixed projections is 1."""
    m1, m2 = Fraction(tm1, 2), Fraction(tm2, 2)
    if abs(m1) > j1 or abs(m2) > j2:
        return
    if (j1 + m1).denominator != 1 or (j2 + m2).denominator != 1:
        return
    total = 0.0
    j3 = abs(j1 - j2)
    while j3 <= j1 + j2:
        total += (2 * j3 + 1) * wigner3j(j1, j2, j3, m1, m2, -m1 - m2) ** 2
        j3 += 1
    assert total == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(halfints, halfints, halfints,
       st.integers(-8, 8), st.integers(-8, 8))
def test_3j_column_symmetry(j1, j2, j3, tm1, tm2):
    """Even permutations of columns leave the 3j symbol unchanged."""
    m1, m2 = Fraction(tm1, 2), Fraction(tm2, 2)
    m3 = -m1 - m2
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return
    if (j1 + m1).denominator != 1 or (j2 + m2).denominator != 1 \
            or (j3 + m3).denominator != 1:
        return
    a = wigner3j(j1, j2, j3, m1, m2, m3)
    b = wigner3j(j2, j3, j1, m2, m3, m1)
    c = wigner3j(j3, j1, j2, m3, m1, m2)
    assert a == pytest.approx(b, abs=1e-12)
    assert a == pytest.approx(c, abs=1e-12)


def test_triangle_violations_vanish():
    assert wigner3j(1, 1, 3, 0, 0, 0) == 0.0
    assert wigner3j(1, 1, 2, 1, 1, -2) == pytest.approx(
        _oracle3j(1, 1, 2, 1, 1, -2))
    assert wigner3j(1, 1, 2, 1, 1, 0) == 0.0   # m-sum violation
    assert wigner6j(1, 1, 3, 1, 1, 1) == 0.0
