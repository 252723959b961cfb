"""Electric-dipole transition moments between dressed hyperfine levels.

The body-frame dipole d0 couples rotational states through the rank-1
spherical harmonic; spin projections are spectators.  Strengths are quoted
as s = 3 |mu|^2 / d0^2 so a fully allowed rotational line carries s = 1 per
polarization and each lower level obeys the sum rule sum_lines s = 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hamiltonian import EigenLevel, LevelContext, _c_rot, basis_states
from .molecule import MoleculeSpec

POLARIZATIONS = {-1: "sigma-", 0: "pi", 1: "sigma+"}
POL_INDEX = {v: k for k, v in POLARIZATIONS.items()}


@lru_cache(maxsize=32)
def _dipole_operators(spec: MoleculeSpec, n_max: int):
    """C^1_p matrices (p = -1, 0, +1) over the uncoupled basis."""
    basis = basis_states(spec, n_max)
    dim = len(basis)
    ops = {p: np.zeros((dim, dim)) for p in (-1, 0, 1)}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            if (a.tmS, a.tmI1, a.tmI2) != (b.tmS, b.tmI1, b.tmI2):
                continue
            for p in (-1, 0, 1):
                if a.tmN == b.tmN + 2 * p:
                    ops[p][i, j] = _c_rot(a.tN, a.tmN, b.tN, b.tmN, 1, p)
    return ops


def transition_dipole(ctx: LevelContext, lower: EigenLevel,
                      upper: EigenLevel) -> dict:
    """Dipole moment (Debye) per spherical polarization component."""
    ops = _dipole_operators(ctx.spec, ctx.n_max)
    d0 = ctx.spec.d0
    return {p: d0 * float(upper.composition @ ops[p] @ lower.composition)
            for p in (-1, 0, 1)}


def strength(spec: MoleculeSpec, dipole_debye: float) -> float:
    """Normalized line strength 3 |mu|^2 / d0^2 for one component."""
    return 3.0 * (dipole_debye / spec.d0) ** 2


@dataclass(frozen=True)
class Line:
    """One polarization component of one transition."""

    lower: EigenLevel
    upper: EigenLevel
    pol: str               # 'sigma-', 'pi' or 'sigma+'
    frequency: float       # MHz, upper minus lower
    dipole: float          # Debye, signed
    strength: float        # 3 |mu|^2 / d0^2

    def __str__(self) -> str:
        return (f"{self.lower} -> {self.upper} [{self.pol}] "
                f"f={self.frequency:.6f} MHz s={self.strength:.4f}")


def line_list(ctx: LevelContext, lower_levels, upper_levels,
              strength_min: float = 0.0) -> list:
    """All dipole components between two level sets, strongest first."""
    out = []
    for lo in lower_levels:
        for up in upper_levels:
            mu = transition_dipole(ctx, lo, up)
            for p, val in mu.items():
                s = strength(ctx.spec, val)
                if s <= strength_min:
                    continue
                out.append(Line(lower=lo, upper=up, pol=POLARIZATIONS[p],
                                frequency=up.energy - lo.energy,
                                dipole=val, strength=s))
    out.sort(key=lambda ln: (-ln.strength, ln.frequency))
    return out


def sum_rule_total(ctx: LevelContext, lower: EigenLevel, upper_levels) -> float:
    """sum of s over every line from one lower level (3 when complete)."""
    total = 0.0
    for up in upper_levels:
        for val in transition_dipole(ctx, lower, up).values():
            total += strength(ctx.spec, val)
    return total
