"""Greedy construction of robust storage-level sets ("qudits").

Storage levels live in one rotational manifold; every pair is connected by a
two-photon microwave path through an auxiliary level of a neighbouring
manifold.  A candidate level joins the set only if the whole augmented drive
set keeps off-resonant leakage below a loss budget.

Loss model for one spectator line driven off-resonantly:
    p = (r Omega)^2 / ((r Omega)^2 + Delta^2)
with Omega = pi / (2 t_half_pi) the intended Rabi rate, r the spectator/
intended dipole ratio, and Delta the angular detuning.  Imperfect
polarization (purity rho) drives cross-polarized spectators at
sqrt(1 - rho) * r * Omega.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .hamiltonian import LevelContext
from .transitions import POLARIZATIONS, line_list, transition_dipole, strength

AUDIT_STRENGTH_FLOOR = 1e-12  # spectators weaker than this are ignored


def p_loss(r_omega: float, delta: float) -> float:
    """Off-resonant transfer probability; r_omega and delta in rad/s."""
    if r_omega == 0.0:
        return 0.0
    if delta == 0.0:
        return 1.0
    x = r_omega * r_omega
    return x / (x + delta * delta)


def rabi_from_t_half_pi(t_half_pi: float) -> float:
    """Intended Rabi rate (rad/s) for a pi/2 pulse of the given duration."""
    return math.pi / (2.0 * t_half_pi)


@dataclass(frozen=True)
class DriveLine:
    """One microwave drive: a primary<->auxiliary line addressed resonantly."""

    primary: str      # storage-level label
    aux: str          # auxiliary-level label
    pol: str
    frequency: float  # MHz, |E_aux - E_primary|
    dipole: float     # Debye
    strength: float


@dataclass
class AuditReport:
    """Worst-case leakage per drive over every populated spectator line."""

    per_drive: dict            # drive -> summed spectator loss
    worst: float
    worst_drive: DriveLine
    passed: bool
    budget: float


@dataclass
class QuditPlan:
    """A storage-level set with its two-photon connection graph."""

    molecule: str
    b_gauss: float
    i_kwcm2: float
    pol_angle: float
    primary_n: int
    aux_n: int
    t_half_pi: float
    p_loss_max: float
    purity: float
    strength_min: float
    levels: list = dc_field(default_factory=list)       # labels, energy order
    aux_levels: list = dc_field(default_factory=list)
    drives: list = dc_field(default_factory=list)       # DriveLine
    connections: list = dc_field(default_factory=list)  # (lvl_a, lvl_b, aux)

    @property
    def dimension(self) -> int:
        return len(self.levels)

    def to_json(self, indent: int = 2) -> str:
        doc = {
            "version": 1,
            "molecule": self.molecule,
            "field": {"b_gauss": self.b_gauss, "i_kwcm2": self.i_kwcm2,
                      "pol_angle": self.pol_angle},
            "primary_n": self.primary_n,
            "aux_n": self.aux_n,
            "t_half_pi_s": self.t_half_pi,
            "p_loss_max": self.p_loss_max,
            "purity": self.purity,
            "strength_min": self.strength_min,
            "levels": self.levels,
            "aux_levels": self.aux_levels,
            "drives": [vars(d) for d in self.drives],
            "connections": [list(c) for c in self.connections],
        }
        return json.dumps(doc, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "QuditPlan":
        doc = json.loads(text)
        plan = cls(
            molecule=doc["molecule"],
            b_gauss=doc["field"]["b_gauss"],
            i_kwcm2=doc["field"]["i_kwcm2"],
            pol_angle=doc["field"].get("pol_angle", 0.0),
            primary_n=doc["primary_n"],
            aux_n=doc["aux_n"],
            t_half_pi=doc["t_half_pi_s"],
            p_loss_max=doc["p_loss_max"],
            purity=doc["purity"],
            strength_min=doc["strength_min"],
            levels=list(doc["levels"]),
            aux_levels=list(doc["aux_levels"]),
            connections=[tuple(c) for c in doc["connections"]],
        )
        plan.drives = [DriveLine(**d) for d in doc["drives"]]
        return plan


# ---------------------------------------------------------------------------

class _Spectrum:
    """All primary<->aux lines of a context, cached for repeated audits."""

    def __init__(self, ctx: LevelContext, primary_n: int, aux_n: int):
        self.ctx = ctx
        self.primary = ctx.manifold(primary_n)  # energy order
        self.aux = ctx.manifold(aux_n)
        self.lines = {}  # (p_label, a_label, pol) -> (f, dipole, s)
        for p in self.primary:
            for a in self.aux:
                mu = transition_dipole(ctx, p, a) if aux_n > primary_n \
                    else transition_dipole(ctx, a, p)
                for comp, val in mu.items():
                    s = strength(ctx.spec, val)
                    if s < AUDIT_STRENGTH_FLOOR:
                        continue
                    f = abs(a.energy - p.energy)
                    self.lines[(str(p), str(a), POLARIZATIONS[comp])] = \
                        (f, val, s)
        # flat arrays for vectorized audits
        keys = list(self.lines)
        self._keys = keys
        self._key_index = {k: i for i, k in enumerate(keys)}
        self._freq = np.array([self.lines[k][0] for k in keys])
        self._str = np.array([self.lines[k][2] for k in keys])
        pol_order = list(POLARIZATIONS.values())
        self._pol = np.array([pol_order.index(k[2]) for k in keys])
        self._pol_order = pol_order
        self._plab = np.array([k[0] for k in keys])

    def drive(self, p_label: str, a_label: str, pol: str) -> DriveLine:
        f, d, s = self.lines[(p_label, a_label, pol)]
        return DriveLine(primary=p_label, aux=a_label, pol=pol,
                         frequency=f, dipole=d, strength=s)


def audit(spectrum: _Spectrum, members: list, drives: list,
          t_half_pi: float, purity: float, budget: float) -> AuditReport:
    """Worst single-spectator leakage for each drive; spectators are all
    lines out of populated storage levels except the line being driven."""
    omega = rabi_from_t_half_pi(t_half_pi)
    populated = np.isin(spectrum._plab, list(members))
    per = {}
    for d in drives:
        mask = populated.copy()
        mask[spectrum._key_index[(d.primary, d.aux, d.pol)]] = False
        r = np.sqrt(spectrum._str / d.strength)
        cross = spectrum._pol != spectrum._pol_order.index(d.pol)
        r = np.where(cross, r * math.sqrt(1.0 - purity), r)
        x = (r * omega) ** 2
        delta = 2.0 * math.pi * np.abs(d.frequency - spectrum._freq) * 1.0e6
        p = np.where(mask, x / (x + delta ** 2), 0.0)
        per[(d.primary, d.aux, d.pol)] = float(p.max())
    worst_key = max(per, key=per.get)
    worst = per[worst_key]
    wd = next(d for d in drives
              if (d.primary, d.aux, d.pol) == worst_key)
    return AuditReport(per_drive=per, worst=worst, worst_drive=wd,
                       passed=worst <= budget, budget=budget)


def build_qudit(ctx: LevelContext, primary_n: int, aux_n: int,
                t_half_pi: float, p_loss_max: float,
                purity: float = 0.95, strength_min: float = 0.01,
                d_max: int | None = None) -> QuditPlan:
    """Grow the storage set greedily, one energy-ordered pass over candidates.

    The lowest-energy level of the primary manifold seeds the set.  Each
    later level is admitted if some two-photon path (via any auxiliary level,
    both legs at strength >= strength_min) to an existing member keeps the
    audited worst-case leakage of the augmented drive set within budget.
    Paths through already-used auxiliary levels are preferred, then larger
    leg-strength product, then lower auxiliary energy.
    """
    spectrum = _Spectrum(ctx, primary_n, aux_n)
    members = [str(spectrum.primary[0])]
    drives: list = []
    connections: list = []
    aux_used: list = []

    aux_energy = {str(a): a.energy for a in spectrum.aux}

    for cand_level in spectrum.primary[1:]:
        if d_max is not None and len(members) >= d_max:
            break
        cand = str(cand_level)
        options = []
        for m in members:
            for a in aux_energy:
                for pol_m in POLARIZATIONS.values():
                    lm = spectrum.lines.get((m, a, pol_m))
                    if lm is None or lm[2] < strength_min:
                        continue
                    for pol_c in POLARIZATIONS.values():
                        lc = spectrum.lines.get((cand, a, pol_c))
                        if lc is None or lc[2] < strength_min:
                            continue
                        options.append((a in aux_used, lm[2] * lc[2],
                                        -aux_energy[a], m, a, pol_m, pol_c))
        # best option first: in-set aux, then strength product, low aux energy
        options.sort(key=lambda o: (o[0], o[1], o[2]), reverse=True)
        accepted = False
        for in_set, _, _, m, a, pol_m, pol_c in options:
            trial_drives = list(drives)
            for (p, pol) in ((m, pol_m), (cand, pol_c)):
                d = spectrum.drive(p, a, pol)
                if d not in trial_drives:
                    trial_drives.append(d)
            rep = audit(spectrum, members + [cand], trial_drives,
                        t_half_pi, purity, p_loss_max)
            if rep.passed:
                members.append(cand)
                drives = trial_drives
                connections.append((m, cand, a))
                if a not in aux_used:
                    aux_used.append(a)
                accepted = True
                break
        del accepted

    f = ctx.field
    return QuditPlan(
        molecule=ctx.spec.name, b_gauss=f.b_gauss, i_kwcm2=f.i_kwcm2,
        pol_angle=f.pol_angle, primary_n=primary_n, aux_n=aux_n,
        t_half_pi=t_half_pi, p_loss_max=p_loss_max, purity=purity,
        strength_min=strength_min, levels=members, aux_levels=aux_used,
        drives=drives, connections=connections)


def audit_plan(ctx: LevelContext, plan: QuditPlan) -> AuditReport:
    """Re-audit a stored plan against a freshly diagonalized context."""
    spectrum = _Spectrum(ctx, plan.primary_n, plan.aux_n)
    return audit(spectrum, plan.levels, plan.drives, plan.t_half_pi,
                 plan.purity, plan.p_loss_max)


def manual_plan(ctx: LevelContext, primary_n: int, aux_n: int,
                levels: list, aux_levels: list, t_half_pi: float,
                p_loss_max: float, purity: float = 0.95,
                strength_min: float = 0.01,
                pairs: list | None = None) -> QuditPlan:
    """Assemble a plan from a hand-picked storage and auxiliary set.

    For every (storage, auxiliary) pair -- all combinations, or only
    those in `pairs` -- the strongest polarization component at
    strength >= strength_min becomes a drive; connections collect pairs
    of storage levels sharing an auxiliary.  Useful for reproducing
    published level sets that a greedy search would not select verbatim.
    """
    spectrum = _Spectrum(ctx, primary_n, aux_n)
    known = {str(lvl) for lvl in spectrum.primary}
    bad = [m for m in levels if m not in known]
    if bad:
        raise ValueError(f"unknown storage levels {bad}")
    drives, connections = [], []
    reach: dict = {}
    for m in levels:
        for a in aux_levels:
            if pairs is not None and (m, a) not in pairs:
                continue
            best = None
            for pol in POLARIZATIONS.values():
                line = spectrum.lines.get((m, a, pol))
                if line and line[2] >= strength_min and \
                        (best is None or line[2] > best[1][2]):
                    best = (pol, line)
            if best is None:
                continue
            pol, (freq, dip, s) = best
            drives.append(DriveLine(primary=m, aux=a, pol=pol,
                                    frequency=freq, dipole=dip, strength=s))
            for other in reach.get(a, []):
                connections.append((other, m, a))
            reach.setdefault(a, []).append(m)
    f = ctx.field
    return QuditPlan(
        molecule=ctx.spec.name, b_gauss=f.b_gauss, i_kwcm2=f.i_kwcm2,
        pol_angle=f.pol_angle, primary_n=primary_n, aux_n=aux_n,
        t_half_pi=t_half_pi, p_loss_max=p_loss_max, purity=purity,
        strength_min=strength_min, levels=list(levels),
        aux_levels=list(aux_levels), drives=drives,
        connections=connections)
