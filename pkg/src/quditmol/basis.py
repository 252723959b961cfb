"""Basis-set enumeration for diatomic molecules in Sigma electronic states.

The internal representation throughout the package is the uncoupled basis
|N, m_N> |m_S> |m_I1> |m_I2>  quantized along the magnetic field axis.  A
coupled enumeration (N,S coupled to J, then nuclear spins added in order) is
provided for counting and for zero-field labelling, but no matrix element is
ever evaluated in the coupled scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .halfint import HalfInt


@dataclass(frozen=True, order=True)
class BasisState:
    """Uncoupled basis state, all quantum numbers stored doubled."""

    tN: int
    tmN: int
    tmS: int
    tmI1: int
    tmI2: int

    @property
    def tMF(self) -> int:
        return self.tmN + self.tmS + self.tmI1 + self.tmI2

    @property
    def N(self) -> HalfInt:
        return HalfInt(self.tN)

    @property
    def mN(self) -> HalfInt:
        return HalfInt(self.tmN)

    @property
    def mS(self) -> HalfInt:
        return HalfInt(self.tmS)

    @property
    def mI1(self) -> HalfInt:
        return HalfInt(self.tmI1)

    @property
    def mI2(self) -> HalfInt:
        return HalfInt(self.tmI2)

    def __str__(self) -> str:
        parts = [
            f"N={HalfInt(self.tN)}",
            f"mN={HalfInt(self.tmN)}",
            f"mS={HalfInt(self.tmS)}",
            f"mI1={HalfInt(self.tmI1)}",
            f"mI2={HalfInt(self.tmI2)}",
        ]
        return "|" + " ".join(parts) + ">"


@dataclass(frozen=True, order=True)
class CoupledBasisState:
    """Coupled state ((N,S)J, I1)F1, I2)F with projection m_F (all doubled)."""

    tN: int
    tJ: int
    tF1: int
    tF: int
    tmF: int


def _projections(tj: int) -> Iterator[int]:
    return iter(range(-tj, tj + 1, 2))


def _couplings(tj1: int, tj2: int) -> Iterator[int]:
    return iter(range(abs(tj1 - tj2), tj1 + tj2 + 1, 2))


def enumerate_basis(spec, n_max: int, scheme: str = "uncoupled"):
    """All basis states with N <= n_max in canonical order.

    Canonical order: N ascending, then total projection M_F ascending, then
    (m_N, m_S, m_I1, m_I2) ascending.  The order is a pure function of the
    spins and n_max.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    tS, tI1, tI2 = spec.tS, spec.tI1, spec.tI2
    if min(tS, tI1, tI2) < 0:
        raise ValueError("spins must be non-negative")

    if scheme == "uncoupled":
        states = [
            BasisState(tN, tmN, tmS, tmI1, tmI2)
            for tN in range(0, 2 * n_max + 1, 2)
            for tmN in _projections(tN)
            for tmS in _projections(tS)
            for tmI1 in _projections(tI1)
            for tmI2 in _projections(tI2)
        ]
        states.sort(key=lambda s: (s.tN, s.tMF, s.tmN, s.tmS, s.tmI1, s.tmI2))
        return states

    if scheme == "coupled":
        states = [
            CoupledBasisState(tN, tJ, tF1, tF, tmF)
            for tN in range(0, 2 * n_max + 1, 2)
            for tJ in _couplings(tN, tS)
            for tF1 in _couplings(tJ, tI1)
            for tF in _couplings(tF1, tI2)
            for tmF in _projections(tF)
        ]
        states.sort(key=lambda s: (s.tN, s.tmF, s.tJ, s.tF1, s.tF))
        return states

    raise ValueError(f"unknown scheme {scheme!r}")


def manifold_size(spec, n: int) -> int:
    """Closed-form number of hyperfine levels in rotational manifold N=n."""
    return (2 * n + 1) * (spec.tS + 1) * (spec.tI1 + 1) * (spec.tI2 + 1)
