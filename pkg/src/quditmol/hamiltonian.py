"""Effective ground-state Hamiltonian of 1-Sigma / 2-Sigma diatomics.

Builds the rotation + hyperfine + Zeeman + ac-Stark Hamiltonian in the
uncoupled basis, diagonalizes it per M_F block, labels the eigenstates and
tracks them across field scans by eigenvector overlap.

Units: energies over h in MHz, B in Gauss, laser intensity in kW cm^-2.
Energy zero: the B=0, I=0 energy of the lowest N=0 level (a pure reporting
convention; all physics is in frequency differences).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .basis import BasisState, enumerate_basis
from .molecule import (DOUBLET, MU_B_MHZ_PER_G, MU_N_MHZ_PER_G, SINGLET,
                       FieldPoint, MoleculeSpec)
from .wigner import wigner3j

# Finite-difference steps for magnetic moment and ac-Stark slope.
DB_GAUSS = 1.0e-3
DI_KWCM2 = 1.0e-3

DEGENERACY_TOL_MHZ = 1.0e-8
OVERLAP_WARN = 0.5  # |<old|new>|^2 below this flags an ambiguous connection


# ---------------------------------------------------------------------------
# elementary matrix elements

def _t1(tj: int, tm_bra: int, tm_ket: int, p: int) -> float:
    """<j m_bra| T^1_p |j m_ket> for an angular momentum j (doubled args)."""
    j = tj / 2.0
    m = tm_ket / 2.0
    if p == 0:
        return m if tm_bra == tm_ket else 0.0
    if p == 1 and tm_bra == tm_ket + 2:
        return -math.sqrt(j * (j + 1) - m * (m + 1)) / math.sqrt(2.0)
    if p == -1 and tm_bra == tm_ket - 2:
        return math.sqrt(j * (j + 1) - m * (m - 1)) / math.sqrt(2.0)
    return 0.0


def _c_rot(tn_bra: int, tm_bra: int, tn_ket: int, tm_ket: int, k: int, q: int) -> float:
    """<N' m'| C^k_q |N m> for the Racah spherical harmonic on the rotor."""
    reduced = ((-1) ** (tn_bra // 2)
               * math.sqrt((tn_bra + 1) * (tn_ket + 1))
               * wigner3j(tn_bra / 2, k, tn_ket / 2, 0, 0, 0))
    if reduced == 0.0:
        return 0.0
    phase = (-1) ** ((tn_bra - tm_bra) // 2)
    return phase * wigner3j(tn_bra / 2, k, tn_ket / 2,
                            -tm_bra / 2, q, tm_ket / 2) * reduced


def _t2_quad(ti: int, tm_bra: int, tm_ket: int, p: int) -> float:
    """Nuclear quadrupole tensor normalized to 1 in the stretched state."""
    denom = wigner3j(ti / 2, 2, ti / 2, -ti / 2, 0, ti / 2)
    if denom == 0.0:
        return 0.0
    phase = (-1) ** ((ti - tm_bra) // 2)
    return phase * wigner3j(ti / 2, 2, ti / 2, -tm_bra / 2, p, tm_ket / 2) / denom


_SUBS = ("N", "S", "I1", "I2")


def _sub_qn(state: BasisState, sub: str, spec: MoleculeSpec):
    if sub == "N":
        return state.tN, state.tmN
    if sub == "S":
        return spec.tS, state.tmS
    if sub == "I1":
        return spec.tI1, state.tmI1
    return spec.tI2, state.tmI2


def _others_equal(a: BasisState, b: BasisState, involved: tuple, spec) -> bool:
    for sub in _SUBS:
        if sub in involved:
            continue
        if _sub_qn(a, sub, spec) != _sub_qn(b, sub, spec):
            return False
    return True


def _scalar(a: BasisState, b: BasisState, sub1: str, sub2: str, spec) -> float:
    """<a| J_sub1 . J_sub2 |b> in the uncoupled basis."""
    if a.tN != b.tN or not _others_equal(a, b, (sub1, sub2), spec):
        return 0.0
    tj1, tm1b = _sub_qn(a, sub1, spec)
    _, tm1k = _sub_qn(b, sub1, spec)
    tj2, tm2b = _sub_qn(a, sub2, spec)
    _, tm2k = _sub_qn(b, sub2, spec)
    total = 0.0
    for p in (-1, 0, 1):
        total += ((-1) ** p) * _t1(tj1, tm1b, tm1k, p) * _t1(tj2, tm2b, tm2k, -p)
    return total


def _cg_112(p1: int, p2: int, pp: int) -> float:
    """Clebsch-Gordan <1 p1 1 p2 | 2 P>."""
    return ((-1) ** pp) * math.sqrt(5.0) * wigner3j(1, 1, 2, p1, p2, -pp)


def _t2_pair(spec, a: BasisState, b: BasisState, sub1: str, sub2: str, pp: int) -> float:
    """<a| [J_sub1 x J_sub2]^2_P |b> with the rotor untouched."""
    if a.tN != b.tN or a.tmN != b.tmN:
        return 0.0
    if not _others_equal(a, b, (sub1, sub2), spec):
        return 0.0
    tj1, tm1b = _sub_qn(a, sub1, spec)
    _, tm1k = _sub_qn(b, sub1, spec)
    tj2, tm2b = _sub_qn(a, sub2, spec)
    _, tm2k = _sub_qn(b, sub2, spec)
    total = 0.0
    for p1 in (-1, 0, 1):
        p2 = pp - p1
        if abs(p2) > 1:
            continue
        cg = _cg_112(p1, p2, pp)
        if cg == 0.0:
            continue
        total += cg * _t1(tj1, tm1b, tm1k, p1) * _t1(tj2, tm2b, tm2k, p2)
    return total


def _tensor_contraction(spec, a: BasisState, b: BasisState, sub1: str, sub2: str) -> float:
    """<a| sum_p (-1)^p C^2_p(rot) [J_sub1 x J_sub2]^2_-p |b>."""
    if not _others_equal(a, b, ("N", sub1, sub2), spec):
        return 0.0
    total = 0.0
    for p in (-2, -1, 0, 1, 2):
        crot = _c_rot(a.tN, a.tmN, b.tN, b.tmN, 2, p)
        if crot == 0.0:
            continue
        # need a fake pair-state comparison with identical rotor numbers
        spin = _t2_pair(spec, _with_rot(a, b.tN, b.tmN), b, sub1, sub2, -p)
        total += ((-1) ** p) * crot * spin
    return total


def _with_rot(state: BasisState, tn: int, tmn: int) -> BasisState:
    if state.tN == tn and state.tmN == tmn:
        return state
    return BasisState(tn, tmn, state.tmS, state.tmI1, state.tmI2)


def _quadrupole(spec, a: BasisState, b: BasisState, nucleus: int) -> float:
    """<a| sum_p (-1)^p C^2_p(rot) T^2_-p(I_i)/T^2_stretched |b>."""
    sub = "I1" if nucleus == 1 else "I2"
    ti = spec.tI1 if nucleus == 1 else spec.tI2
    if ti < 2:
        return 0.0
    if not _others_equal(a, b, ("N", sub), spec):
        return 0.0
    tm_bra = a.tmI1 if nucleus == 1 else a.tmI2
    tm_ket = b.tmI1 if nucleus == 1 else b.tmI2
    total = 0.0
    for p in (-2, -1, 0, 1, 2):
        crot = _c_rot(a.tN, a.tmN, b.tN, b.tmN, 2, p)
        if crot == 0.0:
            continue
        total += ((-1) ** p) * crot * _t2_quad(ti, tm_bra, tm_ket, -p)
    return total


def _d2_q0(q: int, theta: float) -> float:
    """Reduced Wigner rotation element d^2_{q0}(theta)."""
    if q == 0:
        return 0.5 * (3.0 * math.cos(theta) ** 2 - 1.0)
    s = math.sqrt(3.0 / 8.0)
    if q == 1:
        return -s * math.sin(2.0 * theta)
    if q == -1:
        return s * math.sin(2.0 * theta)
    return s * math.sin(theta) ** 2  # |q| = 2


# ---------------------------------------------------------------------------
# operator assembly (cached per molecule and basis size)

@lru_cache(maxsize=32)
def _operators(spec: MoleculeSpec, n_max: int):
    """Field-independent operator matrices over the uncoupled basis."""
    basis = enumerate_basis(spec, n_max)
    dim = len(basis)
    h0 = np.zeros((dim, dim))
    hz = np.zeros((dim, dim))      # per Gauss
    c2rot = np.zeros((dim, dim, 5))  # C^2_q(rotor), q = -2..2
    fsq = np.zeros((dim, dim))     # total F^2, for zero-field labelling

    is_doublet = spec.symmetry == DOUBLET
    if is_doublet and spec.tI1 != 0:
        raise ValueError("doublet_sigma supports a single spin-carrying nucleus "
                         "(nucleus 2); set I1 = 0")

    for i, a in enumerate(basis):
        n = a.tN // 2
        nn = n * (n + 1)
        h0[i, i] += spec.brot * nn - spec.drot * nn * nn
        hz[i, i] += -spec.g_r * MU_N_MHZ_PER_G * (a.tmN / 2.0)
        hz[i, i] += -spec.g1 * (1.0 - spec.sigma1) * MU_N_MHZ_PER_G * (a.tmI1 / 2.0)
        hz[i, i] += -spec.g2 * (1.0 - spec.sigma2) * MU_N_MHZ_PER_G * (a.tmI2 / 2.0)
        if is_doublet:
            hz[i, i] += spec.g_s * MU_B_MHZ_PER_G * (a.tmS / 2.0)

        for j in range(i, dim):
            b = basis[j]
            if abs(a.tMF - b.tMF) > 4:
                continue
            val = 0.0
            if is_doublet:
                if spec.gamma_sr:
                    val += spec.gamma_sr * _scalar(a, b, "N", "S", spec)
                if spec.b_fermi:
                    val += spec.b_fermi * _scalar(a, b, "I2", "S", spec)
                if spec.c_dipolar:
                    # c [(I.z)(S.z) - I.S/3] = c (sqrt6/3) C^2 . T^2(I,S)
                    val += (spec.c_dipolar * math.sqrt(6.0) / 3.0
                            * _tensor_contraction(spec, a, b, "I2", "S"))
                if spec.c_nsr:
                    val += spec.c_nsr * _scalar(a, b, "I2", "N", spec)
            else:
                if spec.eqq1:
                    val += spec.eqq1 / 4.0 * _quadrupole(spec, a, b, 1)
                if spec.eqq2:
                    val += spec.eqq2 / 4.0 * _quadrupole(spec, a, b, 2)
                if spec.c1:
                    val += spec.c1 * _scalar(a, b, "I1", "N", spec)
                if spec.c2:
                    val += spec.c2 * _scalar(a, b, "I2", "N", spec)
                if spec.c3:
                    val += (-spec.c3 * math.sqrt(6.0)
                            * _tensor_contraction(spec, a, b, "I1", "I2"))
                if spec.c4:
                    val += spec.c4 * _scalar(a, b, "I1", "I2", spec)
            if val != 0.0:
                h0[i, j] += val
                h0[j, i] += 0.0 if i == j else val

            if (a.tmS, a.tmI1, a.tmI2) == (b.tmS, b.tmI1, b.tmI2):
                for q in (-2, -1, 0, 1, 2):
                    cv = _c_rot(a.tN, a.tmN, b.tN, b.tmN, 2, q)
                    if cv != 0.0:
                        c2rot[i, j, q + 2] = cv
                        if i != j:
                            c2rot[j, i, -q + 2] = cv * ((-1) ** q)

            fv = _fsq_element(spec, a, b)
            if fv != 0.0:
                fsq[i, j] = fv
                if i != j:
                    fsq[j, i] = fv

    return basis, h0, hz, c2rot, fsq


def _fsq_element(spec, a: BasisState, b: BasisState) -> float:
    """<a| F^2 |b> with F = N + S + I1 + I2."""
    val = 0.0
    if a == b:
        for sub in _SUBS:
            tj, _ = _sub_qn(a, sub, spec)
            val += (tj / 2.0) * (tj / 2.0 + 1.0)
    pairs = (("N", "S"), ("N", "I1"), ("N", "I2"),
             ("S", "I1"), ("S", "I2"), ("I1", "I2"))
    for s1, s2 in pairs:
        val += 2.0 * _scalar(a, b, s1, s2, spec)
    return val


def _ac_stark(spec: MoleculeSpec, n_max: int, pol_angle: float) -> np.ndarray:
    """ac-Stark operator per unit intensity (kW cm^-2)."""
    basis, _, _, c2rot, _ = _operators(spec, n_max)
    dim = len(basis)
    mat = -spec.alpha_iso * np.eye(dim)
    c2 = np.zeros((dim, dim))
    for q in (-2, -1, 0, 1, 2):
        d = _d2_q0(q, pol_angle)
        if d != 0.0:
            c2 += d * c2rot[:, :, q + 2]
    mat -= spec.alpha_aniso * c2
    return mat


def build_hamiltonian(spec: MoleculeSpec, field: FieldPoint, n_max: int) -> np.ndarray:
    """Full Hamiltonian matrix (MHz) in the uncoupled basis at one field point."""
    _, h0, hz, _, _ = _operators(spec, n_max)
    h = h0 + field.b_gauss * hz
    if field.i_kwcm2 != 0.0:
        h = h + field.i_kwcm2 * _ac_stark(spec, n_max, field.pol_angle)
    return h


def basis_states(spec: MoleculeSpec, n_max: int):
    return _operators(spec, n_max)[0]


# ---------------------------------------------------------------------------
# eigenlevels

@dataclass(frozen=True)
class LevelLabel:
    """Printable level identity.

    1-Sigma: (N, m_F)_i with i counting energy order inside the (N, m_F)
    family.  2-Sigma: (N, F_ordinal, m_F) with the zero-field F pedigree; for
    the two F=1 copies the ordinal renders as 'l'/'u'.
    """

    n: int
    tmF: int
    index: int = 0
    tF: Optional[int] = None
    f_copies: int = 1

    def _mf_str(self) -> str:
        return str(self.tmF // 2) if self.tmF % 2 == 0 else f"{self.tmF}/2"

    def __str__(self) -> str:
        if self.tF is None:
            return f"({self.n},{self._mf_str()})_{self.index}"
        f_str = str(self.tF // 2) if self.tF % 2 == 0 else f"{self.tF}/2"
        if self.f_copies == 2:
            f_str += "l" if self.index == 0 else "u"
        elif self.f_copies > 2:
            f_str += f"_{self.index}"
        return f"({self.n},{f_str},{self._mf_str()})"

    @property
    def key(self):
        return (self.n, self.tmF, self.tF, self.index)


@dataclass(frozen=True)
class EigenLevel:
    """One dressed hyperfine level from a diagonalization context."""

    index: int
    energy: float            # MHz, relative to the documented zero
    label: LevelLabel
    composition: np.ndarray  # amplitudes over the uncoupled basis
    mu: float                # -dE/dB, MHz per Gauss
    dedi: float              # dE/dI, MHz per kW cm^-2
    tmF: int

    def __str__(self) -> str:
        return str(self.label)


class LevelContext:
    """Eigenlevels of one molecule at one field point, energy-sorted."""

    def __init__(self, spec, field, n_max, basis, energies, vectors, labels,
                 mu, dedi, e_ref):
        self.spec = spec
        self.field = field
        self.n_max = n_max
        self.basis = basis
        self.energies = energies
        self.vectors = vectors  # column k is the eigenvector of level k
        self.e_ref = e_ref
        tmf = [_dominant_tmf(basis, vectors[:, k]) for k in range(len(energies))]
        self.levels = [
            EigenLevel(k, energies[k] - e_ref, labels[k], vectors[:, k],
                       mu[k], dedi[k], tmf[k])
            for k in range(len(energies))
        ]
        self._by_label = {lev.label.key: lev for lev in self.levels}

    def level(self, label: LevelLabel) -> EigenLevel:
        return self._by_label[label.key]

    def find(self, n: int, tmF: int, index: int = 0,
             tF: Optional[int] = None) -> EigenLevel:
        for lev in self.levels:
            lab = lev.label
            if lab.n == n and lab.tmF == tmF and lab.index == index:
                if tF is None or lab.tF == tF:
                    return lev
        raise KeyError(f"no level (n={n}, 2mF={tmF}, i={index}, 2F={tF})")

    def manifold(self, n: int):
        return [lev for lev in self.levels if lev.label.n == n]


def _dominant_tmf(basis, vec) -> int:
    w = {}
    for amp, st in zip(vec, basis):
        w[st.tMF] = w.get(st.tMF, 0.0) + amp * amp
    return max(sorted(w), key=lambda k: w[k])


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col)))
        if col[idx] < 0:
            out[:, k] = -col
    return out


def _eigh_blocks(h: np.ndarray, basis, hz: np.ndarray, hac: np.ndarray,
                 blocked: bool):
    """Per-M_F-block diagonalization with deterministic degeneracy handling."""
    dim = h.shape[0]
    energies = np.empty(dim)
    vectors = np.zeros((dim, dim))
    if blocked:
        groups = {}
        for i, st in enumerate(basis):
            groups.setdefault(st.tMF, []).append(i)
        blocks = [np.array(ix) for _, ix in sorted(groups.items())]
    else:
        blocks = [np.arange(dim)]

    pos = 0
    order_keys = []
    for ix in blocks:
        sub = h[np.ix_(ix, ix)]
        vals, vecs = np.linalg.eigh(sub)
        vecs = _resolve_degeneracies(vals, vecs, hz[np.ix_(ix, ix)],
                                     hac[np.ix_(ix, ix)])
        for k in range(len(ix)):
            energies[pos] = vals[k]
            vectors[ix, pos] = vecs[:, k]
            order_keys.append((vals[k], basis[ix[0]].tMF, k))
            pos += 1

    order = sorted(range(dim), key=lambda t: order_keys[t])
    return energies[order], _fix_phase(vectors[:, order])


def _resolve_degeneracies(vals, vecs, hz_sub, hac_sub):
    """Rediagonalize the Zeeman (then Stark) operator inside degenerate sets."""
    out = vecs.copy()
    start = 0
    n = len(vals)
    while start < n:
        end = start + 1
        while end < n and vals[end] - vals[end - 1] < DEGENERACY_TOL_MHZ:
            end += 1
        if end - start > 1:
            block = out[:, start:end]
            for op in (hz_sub, hac_sub):
                proj = block.T @ op @ block
                if np.max(np.abs(proj - np.diag(np.diag(proj)))) > 1e-12:
                    w, u = np.linalg.eigh(proj)
                    block = block @ u
            # final deterministic tie-break: lexicographic on composition
            keys = [tuple(np.round(block[:, k], 9)) for k in range(end - start)]
            order = sorted(range(end - start), key=lambda k: keys[k])
            out[:, start:end] = block[:, order]
        start = end
    return out


@lru_cache(maxsize=16)
def _reference_energy(spec: MoleculeSpec, n_max: int) -> float:
    h = build_hamiltonian(spec, FieldPoint(0.0, 0.0), n_max)
    return float(np.linalg.eigvalsh(h)[0])


def _raw_diag(spec, field, n_max):
    basis, _, hz, _, _ = _operators(spec, n_max)
    hac = _ac_stark(spec, n_max, field.pol_angle)
    h = build_hamiltonian(spec, field, n_max)
    blocked = _is_axial(field)
    return basis, *_eigh_blocks(h, basis, hz, hac, blocked)


def _is_axial(field: FieldPoint) -> bool:
    return field.i_kwcm2 == 0.0 or math.isclose(
        math.sin(field.pol_angle), 0.0, abs_tol=1e-12)


def _match(v_ref: np.ndarray, v_new: np.ndarray):
    """Max-overlap column assignment; returns permutation and worst overlap^2."""
    ov = np.abs(v_ref.T @ v_new)
    rows, cols = linear_sum_assignment(-ov)
    perm = np.empty(len(cols), dtype=int)
    perm[rows] = cols
    worst = float(np.min(ov[rows, cols]) ** 2)
    return perm, worst


def diagonalize(spec: MoleculeSpec, field: FieldPoint, n_max: int) -> LevelContext:
    """Eigenlevels with labels, magnetic moments and ac-Stark slopes."""
    basis, energies, vectors = _raw_diag(spec, field, n_max)
    dim = len(energies)

    # central finite differences, levels matched to the central point by overlap
    def _fd(make_field, step):
        _, e_p, v_p = _raw_diag(spec, make_field(+step), n_max)
        _, e_m, v_m = _raw_diag(spec, make_field(-step), n_max)
        perm_p, _ = _match(vectors, v_p)
        perm_m, _ = _match(vectors, v_m)
        return (e_p[perm_p] - e_m[perm_m]) / (2.0 * step)

    b0, i0 = field.b_gauss, field.i_kwcm2
    db = min(DB_GAUSS, b0) if b0 > 0 else DB_GAUSS
    mu = -_fd(lambda s: FieldPoint(max(b0 + s, 0.0), i0, field.pol_angle), db)
    if b0 == 0.0:
        # one-sided state matching fails at the degenerate zero-field point;
        # use the Hellmann-Feynman expectation instead
        _, _, hz, _, _ = _operators(spec, n_max)
        mu = -np.einsum("ik,ij,jk->k", vectors, hz, vectors)
    di = DI_KWCM2
    if i0 >= di or i0 == 0.0:
        dedi = _fd(lambda s: FieldPoint(b0, max(i0 + s, 0.0), field.pol_angle), di)
        if i0 == 0.0:
            hac = _ac_stark(spec, n_max, field.pol_angle)
            dedi = np.einsum("ik,ij,jk->k", vectors, hac, vectors)
    else:
        dedi = _fd(lambda s: FieldPoint(b0, i0 + s, field.pol_angle), i0 / 2.0)

    labels = _assign_labels(spec, field, n_max, basis, energies, vectors)
    e_ref = _reference_energy(spec, n_max)
    return LevelContext(spec, field, n_max, basis, energies, vectors, labels,
                        mu, dedi, e_ref)


# ---------------------------------------------------------------------------
# labelling

def _dominant_n(basis, vec) -> int:
    w = {}
    for amp, st in zip(vec, basis):
        w[st.tN // 2] = w.get(st.tN // 2, 0.0) + amp * amp
    return max(sorted(w), key=lambda k: w[k])


def _assign_labels(spec, field, n_max, basis, energies, vectors):
    if spec.symmetry == SINGLET:
        return _labels_by_energy_order(basis, energies, vectors)
    return _labels_doublet(spec, field, n_max, basis, energies, vectors)


def _labels_by_energy_order(basis, energies, vectors):
    """(N, m_F)_i labels: i counts energy order within each (N, m_F) family."""
    dim = len(energies)
    n_of = [_dominant_n(basis, vectors[:, k]) for k in range(dim)]
    tmf_of = [_dominant_tmf(basis, vectors[:, k]) for k in range(dim)]
    counters = {}
    labels = []
    for k in range(dim):  # k runs in ascending energy order already
        key = (n_of[k], tmf_of[k])
        idx = counters.get(key, 0)
        counters[key] = idx + 1
        labels.append(LevelLabel(n=key[0], tmF=key[1], index=idx))
    return labels


def _labels_doublet(spec, field, n_max, basis, energies, vectors):
    """Zero-field (N, F, m_F) pedigree carried adiabatically to the field point."""
    _, _, _, _, fsq = _operators(spec, n_max)
    steps = 80
    b_grid = np.linspace(0.0, field.b_gauss, steps + 1)
    _, _, v0 = _raw_diag(spec, FieldPoint(0.0, field.i_kwcm2,
                                          field.pol_angle), n_max)
    v_prev = v0

    # zero-field labels from F^2 expectation values
    dim = len(energies)
    n_of = [_dominant_n(basis, v0[:, k]) for k in range(dim)]
    tmf_of = [_dominant_tmf(basis, v0[:, k]) for k in range(dim)]
    tf_of = []
    for k in range(dim):
        f_expect = float(v0[:, k] @ fsq @ v0[:, k])
        tf = int(round(-1.0 + math.sqrt(1.0 + 4.0 * f_expect)))
        tf_of.append(tf)
    counters: dict = {}
    copies: dict = {}
    zero_labels = []
    for k in range(dim):
        key = (n_of[k], tf_of[k], tmf_of[k])
        idx = counters.get(key, 0)
        counters[key] = idx + 1
        zero_labels.append((key, idx))
    for (key, idx) in zero_labels:
        copies[key] = max(copies.get(key, 0), idx + 1)
    labels0 = [LevelLabel(n=key[0], tF=key[1], tmF=key[2], index=idx,
                          f_copies=copies[key])
               for key, idx in zero_labels]

    perm_total = np.arange(dim)
    for b in b_grid[1:]:
        _, _, v_new = _raw_diag(spec, FieldPoint(b, field.i_kwcm2,
                                                 field.pol_angle), n_max)
        perm, _ = _match(v_prev, v_new)
        perm_total = perm[perm_total]
        v_prev = v_new

    labels = [None] * dim
    for k0 in range(dim):
        labels[perm_total[k0]] = labels0[k0]
    return labels


# ---------------------------------------------------------------------------
# field scans

@dataclass
class LevelScan:
    """Adiabatically connected level curves over a monotone field grid."""

    axis: str                 # 'B' or 'I'
    values: np.ndarray
    energies: np.ndarray      # shape (n_points, n_levels), MHz rel. to zero
    mu: np.ndarray            # same shape, MHz/G
    dedi: np.ndarray          # same shape, MHz per kW cm^-2
    labels: list              # per curve, from the final grid point
    flagged: list             # (point_index, curve_index) ambiguous overlaps


def scan_levels(spec: MoleculeSpec, axis: str, values, fixed: FieldPoint,
                n_max: int) -> LevelScan:
    """Track eigenlevels across a field scan by maximum-overlap assignment."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) < 2:
        raise ValueError("scan grid must contain at least 2 points")
    if not (np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)):
        raise ValueError("scan grid must be strictly monotone")
    if axis not in ("B", "I"):
        raise ValueError(f"axis must be 'B' or 'I', got {axis!r}")

    def _field(v):
        if axis == "B":
            return FieldPoint(v, fixed.i_kwcm2, fixed.pol_angle)
        return FieldPoint(fixed.b_gauss, v, fixed.pol_angle)

    contexts = [diagonalize(spec, _field(values[0]), n_max)]
    dim = len(contexts[0].levels)
    energies = np.empty((len(values), dim))
    mu = np.empty_like(energies)
    dedi = np.empty_like(energies)
    flagged = []

    perm_total = np.arange(dim)
    v_prev = contexts[0].vectors
    ctx = contexts[0]
    energies[0], mu[0], dedi[0] = ctx.energies - ctx.e_ref, \
        [l.mu for l in ctx.levels], [l.dedi for l in ctx.levels]

    for ip, v in enumerate(values[1:], start=1):
        ctx = diagonalize(spec, _field(v), n_max)
        perm, worst = _match(v_prev, ctx.vectors)
        if worst < OVERLAP_WARN:
            ov = np.abs(v_prev.T @ ctx.vectors)
            for c in range(dim):
                if ov[perm_total[c], perm[perm_total[c]]] ** 2 < OVERLAP_WARN:
                    flagged.append((ip, c))
        perm_total = np.array([perm[p] for p in perm_total])
        e = ctx.energies - ctx.e_ref
        m = np.array([l.mu for l in ctx.levels])
        d = np.array([l.dedi for l in ctx.levels])
        energies[ip] = e[perm_total]
        mu[ip] = m[perm_total]
        dedi[ip] = d[perm_total]
        v_prev = ctx.vectors

    final_labels = [ctx.levels[perm_total[c]].label for c in range(dim)]
    return LevelScan(axis=axis, values=values, energies=energies, mu=mu,
                     dedi=dedi, labels=final_labels, flagged=flagged)
