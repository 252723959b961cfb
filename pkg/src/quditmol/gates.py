"""Two-photon microwave gates and pulse-sequence compilation.

A pair of storage levels |k>, |l> sharing a resonant drive to a common
level |c> in the neighbouring rotational manifold evolves, in the
rotating frame, under

    H_r = (hbar/2) [[0,              Om_kc e^{i phi_kc}, Om_lc e^{i phi_lc}],
                    [Om_kc e^{-i..}, 0,                  0                 ],
                    [Om_lc e^{-i..}, 0,                  0                 ]]

in the ordered basis (|c>, |k>, |l>).  At t = 2 pi / Omt, with
Omt = sqrt(Om_kc^2 + Om_lc^2), the common level returns empty and the
net effect on {|k>, |l>} depends only on the Rabi ratio
zeta = Om_kc / Om_lc and relative phase phi = phi_kc - phi_lc:

    U(zeta, phi) = [[2/(z^2+1) - 1,          -2 z e^{-i phi}/(z^2+1)],
                    [-2 z e^{i phi}/(z^2+1),  1 - 2/(z^2+1)        ]]

U(1, pi) is the X gate, U(sqrt(2)-1, pi) the Hadamard.  A single tone of
duration pi/Om_kc gives the exchange pulse Q_k(phi); two of them compose
the phase gate R_k(phi) = Q_k(pi - phi) Q_k(0) = diag(e^{-i phi},
e^{i phi}) on (|c>, |k>).  When the common level lies in the manifold
*above* the storage levels, the same drive phases realize
U(zeta, 2 pi - phi).

compile_gate turns abstract gates named on a QuditPlan's levels into
timed square pulses on the plan's audited lines, routing two-photon
rotations through intermediate levels when the pair shares no common
level (kept exact by U_{k,l}(z,phi) = U_{k,m}(1,0) U_{m,l}(z,phi+pi)
U_{k,m}(1,0)), and verifies the composed product against the request.
"""

import cmath
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

__all__ = [
    "GateUnitary", "Tone", "Pulse", "PulseSequence", "CompiledGate",
    "evolve_three_level", "two_photon_gate", "exchange_pulse",
    "phase_gate", "compile_gate", "phase_fixed", "UnroutableGateError",
]

HADAMARD_RATIO = math.sqrt(2.0) - 1.0


class UnroutableGateError(ValueError):
    """No path through the plan's connection graph realizes the gate."""


@dataclass(frozen=True)
class GateUnitary:
    """A unitary together with the labels of the states it acts on."""

    matrix: np.ndarray
    labels: tuple
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        err = np.abs(m @ m.conj().T - np.eye(len(m))).max()
        if err > 1e-10:
            raise ValueError(f"matrix is not unitary (deviation {err:.2e})")


def evolve_three_level(omega_kc, omega_lc, phi_kc, phi_lc, t):
    """Propagator for two resonant tones sharing level |c>.

    Basis order (|c>, |k>, |l>); omegas are Rabi rates in rad/s.
    """
    omt = math.hypot(omega_kc, omega_lc)
    if omt <= 0.0:
        raise ValueError("need omega_kc or omega_lc > 0")
    c, s = math.cos(omt * t / 2.0), math.sin(omt * t / 2.0)
    ek, el = cmath.exp(1j * phi_kc), cmath.exp(1j * phi_lc)
    wk, wl = omega_kc / omt, omega_lc / omt
    u = np.array([
        [c,                  -1j * ek * wk * s,          -1j * el * wl * s],
        [-1j * wk * s / ek,   wl**2 + wk**2 * c,          ek.conjugate() * el * wk * wl * (c - 1.0)],
        [-1j * wl * s / el,   el.conjugate() * ek * wk * wl * (c - 1.0),  wk**2 + wl**2 * c],
    ])
    return GateUnitary(u, ("c", "k", "l"),
                       name=f"evolve(t={t:.3e})")


def two_photon_gate(zeta, phi, common_above=False):
    """Net rotation on (|k>, |l>) after one full two-tone cycle.

    zeta is the Rabi ratio Om_kc/Om_lc (> 0), phi the tone phase
    difference phi_kc - phi_lc.  With the common level in the upper
    manifold the realized rotation has phi -> 2 pi - phi.
    """
    if zeta <= 0.0:
        raise ValueError("zeta must be positive")
    if common_above:
        phi = 2.0 * math.pi - phi
    d = zeta * zeta + 1.0
    off = -2.0 * zeta / d
    u = np.array([[2.0 / d - 1.0,            off * cmath.exp(-1j * phi)],
                  [off * cmath.exp(1j * phi), 1.0 - 2.0 / d]])
    return GateUnitary(u, ("k", "l"), name=f"U(zeta={zeta:.6g},phi={phi:.6g})")


def exchange_pulse(phi):
    """Single-tone pi pulse Q_k(phi) swapping |c> and |k> with phases."""
    u = np.array([[0.0, -1j * cmath.exp(1j * phi), 0.0],
                  [-1j * cmath.exp(-1j * phi), 0.0, 0.0],
                  [0.0, 0.0, 1.0]])
    return GateUnitary(u, ("c", "k", "l"), name=f"Q(phi={phi:.6g})")


def phase_gate(phi):
    """R_k(phi) = Q_k(pi - phi) Q_k(0): diag(e^{-i phi}, e^{i phi}, 1)."""
    u = exchange_pulse(math.pi - phi).matrix @ exchange_pulse(0.0).matrix
    return GateUnitary(u, ("c", "k", "l"), name=f"R(phi={phi:.6g})")


# ---------------------------------------------------------------------------
# pulse sequences

@dataclass(frozen=True)
class Tone:
    """One microwave tone of a square pulse."""

    frequency: float    # MHz
    rabi: float         # rad/s
    phase: float        # rad
    pol: str
    lower: str          # storage-level label
    upper: str          # common-level label


@dataclass(frozen=True)
class Pulse:
    """One square pulse: one or two simultaneous tones."""

    tones: tuple
    duration: float     # s
    gate: str = ""


@dataclass
class PulseSequence:
    """Ordered square pulses realizing a compiled gate or circuit."""

    pulses: list = dc_field(default_factory=list)

    @property
    def total_duration(self):
        return sum(p.duration for p in self.pulses)

    def extend(self, other):
        self.pulses.extend(other.pulses)

    def rows(self):
        """Flat (step, tone, frequency_MHz, rabi_Hz, phase_rad, pol,
        duration_s, gate) tuples for schedule export."""
        out = []
        for i, p in enumerate(self.pulses):
            for j, tone in enumerate(p.tones):
                out.append((i, j, tone.frequency, tone.rabi / (2.0 * math.pi),
                            tone.phase, tone.pol, p.duration, p.gate))
        return out


@dataclass
class CompiledGate:
    """An abstract gate with its pulse realization and workspace unitary."""

    request: tuple
    sequence: PulseSequence
    unitary: GateUnitary       # on plan.levels + plan.aux_levels
    residual_phase: float      # global-phase angle absorbed in verification


def phase_fixed(matrix, tol=1e-12):
    """Rescale by a global phase so the first nonzero entry of the first
    nonzero column is real positive."""
    m = np.asarray(matrix, dtype=complex)
    for col in m.T:
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            return m * (abs(col[idx[0]]) / col[idx[0]])
    return m


# ---------------------------------------------------------------------------
# compilation against a plan

def _line_table(plan):
    """(storage, aux) -> DriveLine, strongest polarization component."""
    best = {}
    for d in plan.drives:
        key = (d.primary, d.aux)
        if key not in best or abs(d.dipole) > abs(best[key].dipole):
            best[key] = d
    return best


def _neighbors(plan):
    """Two-photon adjacency: level -> {partner: common aux}."""
    lines = _line_table(plan)
    adj = {lvl: {} for lvl in plan.levels}
    for a, b, aux in plan.connections:
        if (a, aux) in lines and (b, aux) in lines:
            adj[a][b] = aux
            adj[b][a] = aux
    return adj


def _route(adj, src, dst):
    """Shortest connection path src..dst (BFS); None if disconnected."""
    prev, queue = {src: None}, [src]
    while queue:
        cur = queue.pop(0)
        if cur == dst:
            path = [cur]
            while prev[cur] is not None:
                cur = prev[cur]
                path.append(cur)
            return path[::-1]
        for nxt in adj[cur]:
            if nxt not in prev:
                prev[nxt] = cur
                queue.append(nxt)
    return None


def _expand(adj, k, l, zeta, phi):
    """Reduce U_{k,l}(zeta, phi) to directly connected rotations using
    U_{k,l} = U_{k,m}(1, 0) U_{m,l}(zeta, phi + pi) U_{k,m}(1, 0)."""
    path = _route(adj, k, l)
    if path is None:
        raise UnroutableGateError(f"no two-photon path {k} .. {l}")
    steps = [(k, l, zeta, phi)]
    while len(path) > 2:
        k, m = path[0], path[1]
        _, l, zeta, phi = steps.pop(0)
        bridge = (k, m, 1.0, 0.0)
        steps = [bridge, (m, l, zeta, math.fmod(phi + math.pi, 2 * math.pi)),
                 bridge] + steps
        path = path[1:]
    return steps


def _two_tone_pulse(plan, lines, k, l, zeta, phi, label):
    """Square two-tone pulse realizing a directly connected rotation."""
    aux = _neighbors(plan)[k][l]
    dk, dl = lines[(k, aux)], lines[(l, aux)]
    om_max = math.pi / (2.0 * plan.t_half_pi)
    if zeta <= 1.0:
        om_k, om_l = zeta * om_max, om_max
    else:
        om_k, om_l = om_max, om_max / zeta
    phi_mw = phi if plan.aux_n < plan.primary_n \
        else math.fmod(2.0 * math.pi - phi, 2.0 * math.pi)
    omt = math.hypot(om_k, om_l)
    tones = (Tone(dk.frequency, om_k, phi_mw, dk.pol, k, aux),
             Tone(dl.frequency, om_l, 0.0, dl.pol, l, aux))
    return Pulse(tones, 2.0 * math.pi / omt, gate=label), aux, (om_k, om_l)


def _embed(workspace, labels, small):
    """Place a small unitary on the named workspace states."""
    dim = len(workspace)
    u = np.eye(dim, dtype=complex)
    idx = [workspace.index(s) for s in labels]
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            u[a, b] = small[i, j]
    return u


def compile_gate(plan, gate):
    """Compile an abstract gate onto a plan's audited drive lines.

    gate is ("U", k, l, zeta, phi), ("Q", k, phi) or ("R", k, phi) with
    k, l storage-level labels from plan.levels.  Returns a CompiledGate
    whose pulse product is verified against the request (global phase
    fixed, tolerance 1e-10) on the workspace plan.levels + plan.aux_levels.
    """
    workspace = list(plan.levels) + list(plan.aux_levels)
    lines = _line_table(plan)
    adj = _neighbors(plan)
    common_above = plan.aux_n > plan.primary_n
    seq = PulseSequence()
    product = np.eye(len(workspace), dtype=complex)
    kind = gate[0]

    if kind == "U":
        _, k, l, zeta, phi = gate
        name = f"U[{k},{l}]({zeta:.6g},{phi:.6g})"
        for kk, ll, z, ph in _expand(adj, k, l, zeta, phi):
            pulse, aux, (om_k, om_l) = _two_tone_pulse(
                plan, lines, kk, ll, z, ph, name)
            seq.pulses.append(pulse)
            step = evolve_three_level(om_k, om_l, ph, 0.0,
                                      pulse.duration).matrix
            product = _embed(workspace, (aux, kk, ll), step) @ product
        target = _embed(workspace, (k, l),
                        two_photon_gate(zeta, phi, common_above=False).matrix)
    elif kind in ("Q", "R"):
        k, phi = gate[1], gate[2]
        if not adj[k]:
            raise UnroutableGateError(f"{k} has no audited drive line")
        aux = adj[k][next(iter(adj[k]))]
        dk = lines[(k, aux)]
        om = math.pi / (2.0 * plan.t_half_pi)
        name = f"{kind}[{k}]({phi:.6g})"
        phases = [phi] if kind == "Q" else [0.0, math.pi - phi]
        for ph in phases:
            ph_mw = ph if not common_above else \
                math.fmod(2.0 * math.pi - ph, 2.0 * math.pi)
            seq.pulses.append(Pulse(
                (Tone(dk.frequency, om, ph_mw, dk.pol, k, aux),),
                math.pi / om, gate=name))
            step = exchange_pulse(ph).matrix[:2, :2]
            product = _embed(workspace, (aux, k), step) @ product
        small = exchange_pulse(phi).matrix[:2, :2] if kind == "Q" \
            else np.diag([cmath.exp(-1j * phi), cmath.exp(1j * phi)])
        target = _embed(workspace, (aux, k), small)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")

    # each two-tone cycle returns the common level empty (up to a sign),
    # so the request is only ever reproduced on the storage subspace
    d = len(plan.levels)
    if kind == "U":
        leak = np.abs(product[d:, :d]).max() if d < len(workspace) else 0.0
        fixed_p = phase_fixed(product[:d, :d])
        fixed_t = phase_fixed(target[:d, :d])
    else:
        leak = 0.0
        fixed_p, fixed_t = phase_fixed(product), phase_fixed(target)
    err = max(np.abs(fixed_p - fixed_t).max(), leak)
    if err > 1e-10:
        raise AssertionError(f"compiled {name} deviates by {err:.2e}")
    block_p, block_t = product[:d, :d], target[:d, :d]
    ratios = block_p[np.abs(block_t) > 1e-9] / block_t[np.abs(block_t) > 1e-9]
    residual = float(np.angle(ratios[0])) if ratios.size else 0.0
    return CompiledGate(request=gate, sequence=seq,
                        unitary=GateUnitary(product, tuple(workspace), name),
                        residual_phase=residual)
