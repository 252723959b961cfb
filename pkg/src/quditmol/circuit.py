"""Single-molecule Deutsch algorithm on a four-level qudit.

The two-qubit Deutsch circuit is folded onto one d=4 qudit via
|x>|y> -> |2x+y+1>.  Hadamards and oracle calls become products of
two-photon rotations U_{k,l}(zeta, phi) on storage-level pairs:

    H_A = U13(r,pi) U24(r,pi)      H_B = U12(r,pi) U34(r,pi)
    CNOT(A->B) = U34(1,pi)         G_M = U12(r,pi)

with r = sqrt(2)-1, and oracle operators F_1 = 1, F_2 = U12(1,pi) CNOT,
F_3 = CNOT, F_4 = U12(1,pi).  Starting from |2>, the sequence
H_A, H_B, F_i, H_A, G_M leaves the molecule in |2> exactly when the
one-bit function is constant.  (As written, F_3 and F_4 enact the
truth tables (0,1) and (1,0) respectively — swapped relative to their
indices — which is harmless since both are balanced; oracles are
classified by their induced truth table.)

When a pair has no common level the rotation is routed through an
intermediate storage level by the compiler; verdicts are unaffected.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gates import PulseSequence, compile_gate, two_photon_gate
from .hamiltonian import diagonalize
from .molecule import FieldPoint, resolve_dataset
from .search import manual_plan

__all__ = [
    "DEUTSCH_MAPPINGS", "REFERENCE_QUDITS", "DeutschResult",
    "boolean_oracle_table", "oracle_classification", "deutsch_gates",
    "reference_plan", "run_deutsch", "apply", "logical_unitary",
]

_R = math.sqrt(2.0) - 1.0

# physical storage level -> logical qudit index, for the shipped plans
DEUTSCH_MAPPINGS = {
    "40Ca19F": {"(1,1u,-1)": 1, "(1,0,0)": 2, "(1,1l,1)": 3, "(1,1l,0)": 4},
    "87Rb133Cs": {"(0,3)_0": 1, "(0,5)_0": 2, "(0,4)_0": 3, "(0,4)_1": 4},
    "87Rb133Cs:N1": {"(1,4)_0": 1, "(1,3)_0": 2, "(1,2)_0": 3, "(1,1)_0": 4},
}

# shipped working points: every storage level of the CaF qudit shares
# the single common level (0,0,0); the RbCs N=0 qudit uses two common
# levels, which leaves the (1,3) and (1,4) pairs to be routed
REFERENCE_QUDITS = {
    "40Ca19F": dict(
        field=FieldPoint(100.0, 20.0, 0.0), primary_n=1, aux_n=0,
        levels=["(1,1l,1)", "(1,1l,0)", "(1,0,0)", "(1,1u,-1)"],
        aux_levels=["(0,0,0)"], t_half_pi=5e-6, p_loss_max=1e-3,
        strength_min=1e-3),
    "87Rb133Cs": dict(
        field=FieldPoint(181.5, 5.0, 0.0), primary_n=0, aux_n=1,
        levels=["(0,3)_0", "(0,4)_0", "(0,4)_1", "(0,5)_0"],
        aux_levels=["(1,5)_2", "(1,4)_4"], t_half_pi=3e-4,
        p_loss_max=3e-3, strength_min=0.01,
        pairs=[("(0,4)_1", "(1,5)_2"), ("(0,4)_0", "(1,5)_2"),
               ("(0,5)_0", "(1,5)_2"), ("(0,5)_0", "(1,4)_4"),
               ("(0,3)_0", "(1,4)_4")]),
    # N=1 storage variant: a chain of low-Stark-spread levels, linked
    # through one N=0 common level per neighbouring pair
    "87Rb133Cs:N1": dict(
        field=FieldPoint(181.5, 5.0, 0.0), primary_n=1, aux_n=0,
        levels=["(1,4)_0", "(1,3)_0", "(1,2)_0", "(1,1)_0"],
        aux_levels=["(0,3)_1", "(0,2)_1", "(0,1)_1"], t_half_pi=3e-4,
        p_loss_max=1e-3, strength_min=0.01,
        pairs=[("(1,4)_0", "(0,3)_1"), ("(1,3)_0", "(0,3)_1"),
               ("(1,3)_0", "(0,2)_1"), ("(1,2)_0", "(0,2)_1"),
               ("(1,2)_0", "(0,1)_1"), ("(1,1)_0", "(0,1)_1")]),
}


def reference_plan(dataset, n_max=2, t_half_pi=None, variant=None):
    """Build the shipped four-level plan for a dataset name or path."""
    spec = resolve_dataset(dataset)
    key = spec.name if variant is None else f"{spec.name}:{variant}"
    try:
        cfg = REFERENCE_QUDITS[key]
    except KeyError:
        raise ValueError(f"no reference qudit for {key!r}") from None
    ctx = diagonalize(spec, cfg["field"], n_max)
    return manual_plan(
        ctx, cfg["primary_n"], cfg["aux_n"], cfg["levels"],
        cfg["aux_levels"], t_half_pi or cfg["t_half_pi"],
        cfg["p_loss_max"], strength_min=cfg["strength_min"],
        pairs=cfg.get("pairs"))

# F_i as two-photon rotations on logical pairs (application order)
_CNOT = [("U", 3, 4, 1.0, math.pi)]
_ORACLES = {
    1: [],
    2: _CNOT + [("U", 1, 2, 1.0, math.pi)],
    3: _CNOT,
    4: [("U", 1, 2, 1.0, math.pi)],
}


def boolean_oracle_table(i):
    """Truth table (f_i(0), f_i(1)) of the i-th one-bit function."""
    try:
        return {1: (0, 0), 2: (1, 1), 3: (1, 0), 4: (0, 1)}[i]
    except KeyError:
        raise ValueError(f"oracle index {i} not in 1..4") from None


def oracle_classification(i):
    """'constant' or 'balanced' for the i-th one-bit function."""
    f0, f1 = boolean_oracle_table(i)
    return "constant" if f0 == f1 else "balanced"


def _hadamard_a():
    return [("U", 2, 4, _R, math.pi), ("U", 1, 3, _R, math.pi)]


def _hadamard_b():
    return [("U", 3, 4, _R, math.pi), ("U", 1, 2, _R, math.pi)]


def deutsch_gates(oracle):
    """Named stages of the circuit, each a list of rotations in
    application order."""
    return [
        ("H_A", _hadamard_a()),
        ("H_B", _hadamard_b()),
        (f"F_{oracle}", list(_ORACLES[oracle])),
        ("H_A", _hadamard_a()),
        ("G_M", [("U", 1, 2, _R, math.pi)]),
    ]


def apply(operator, state):
    """Apply a pulse product or plain unitary to a state vector."""
    matrix = getattr(operator, "matrix", operator)
    return np.asarray(matrix) @ np.asarray(state, dtype=complex)


@dataclass
class DeutschResult:
    """Outcome of one Deutsch run on a compiled plan."""

    oracle: int
    p2: float
    verdict: str
    classification: str
    total_time: float          # s
    pulse_count: int
    schedule: PulseSequence
    stages: list = dc_field(default_factory=list)   # (name, CompiledGate)

    @property
    def correct(self):
        return self.verdict == self.classification


def _logical_to_labels(mapping):
    inverse = {v: k for k, v in mapping.items()}
    if sorted(inverse) != [1, 2, 3, 4]:
        raise ValueError("mapping must cover logical levels 1..4")
    return inverse


def run_deutsch(plan, oracle, mapping=None):
    """Compile and simulate the circuit for one oracle on a plan.

    mapping assigns plan storage labels to logical indices 1..4; by
    default the shipped assignment for the plan's molecule is used.
    Returns a DeutschResult with P(|2>) measured on the logical |2>
    storage level after the full pulse sequence.
    """
    if mapping is None:
        for candidate in DEUTSCH_MAPPINGS.values():
            if set(candidate) <= set(plan.levels):
                mapping = candidate
                break
        else:
            raise ValueError(f"no default level mapping covers the "
                             f"{plan.molecule!r} plan levels")
    inverse = _logical_to_labels(mapping)
    missing = [lbl for lbl in inverse.values() if lbl not in plan.levels]
    if missing:
        raise ValueError(f"plan lacks mapped levels {missing}")

    workspace = list(plan.levels) + list(plan.aux_levels)
    state = np.zeros(len(workspace), dtype=complex)
    state[workspace.index(inverse[2])] = 1.0

    schedule = PulseSequence()
    stages = []
    for name, ops in deutsch_gates(oracle):
        for op in ops:
            kind, k, l, zeta, phi = op
            compiled = compile_gate(
                plan, (kind, inverse[k], inverse[l], zeta, phi))
            schedule.extend(compiled.sequence)
            stages.append((name, compiled))
            state = apply(compiled.unitary, state)

    p2 = float(abs(state[workspace.index(inverse[2])]) ** 2)
    verdict = "constant" if p2 > 0.5 else "balanced"
    return DeutschResult(
        oracle=oracle, p2=p2, verdict=verdict,
        classification=oracle_classification(oracle),
        total_time=schedule.total_duration,
        pulse_count=len(schedule.pulses),
        schedule=schedule, stages=stages)


def logical_unitary(oracle):
    """Exact 4x4 circuit product, for cross-checking compiled runs."""
    u = np.eye(4, dtype=complex)
    for _, ops in deutsch_gates(oracle):
        for _, k, l, zeta, phi in ops:
            g = np.eye(4, dtype=complex)
            g[np.ix_([k - 1, l - 1], [k - 1, l - 1])] = \
                two_photon_gate(zeta, phi).matrix
            u = g @ u
    return u
