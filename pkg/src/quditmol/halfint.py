"""Exact half-integer angular momentum values.

All spins and projections are stored as doubled integers so that selection
rules (triangle conditions, projection sums) can be checked exactly, with no
floating-point comparisons anywhere in the angular-momentum algebra.
"""

from __future__ import annotations

import numbers
from functools import total_ordering


@total_ordering
class HalfInt:
    """An integer or half-odd-integer, stored as twice its value."""

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if not isinstance(twice, numbers.Integral):
            raise TypeError(f"HalfInt stores 2j as an integer, got {twice!r}")
        self.twice = int(twice)

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Build from an int, float (must be n/2) or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, numbers.Integral):
            return cls(2 * int(value))
        twice = 2 * float(value)
        if abs(twice - round(twice)) > 1e-9:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(round(twice)))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self) -> float:
        return self.twice / 2.0

    def __int__(self) -> int:
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __eq__(self, other) -> bool:
        return self.twice == _twice(other)

    def __lt__(self, other) -> bool:
        return self.twice < _twice(other)

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.twice + _twice(other))

    __radd__ = __add__

    def __sub__(self, other) -> "HalfInt":
        return HalfInt(self.twice - _twice(other))

    def __rsub__(self, other) -> "HalfInt":
        return HalfInt(_twice(other) - self.twice)

    def __repr__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def _twice(value) -> int:
    """Doubled value of an int, float-that-is-n/2, or HalfInt."""
    if isinstance(value, HalfInt):
        return value.twice
    if isinstance(value, numbers.Integral):
        return 2 * int(value)
    twice = 2 * float(value)
    if abs(twice - round(twice)) > 1e-9:
        raise ValueError(f"{value} is not a half-integer")
    return int(round(twice))


def twice(value) -> int:
    """Public alias used by the Wigner-symbol and basis code."""
    return _twice(value)
