"""Hyperfine-resolved qudits in trapped polar molecules.

Level structure of 1-Sigma and 2-Sigma diatomics in magnetic and laser
fields, storage-level search with off-resonant-leakage audits, two-photon
microwave gate synthesis, a single-molecule Deutsch-algorithm simulator,
and analytic decoherence budgets.
"""

from .molecule import FieldPoint, MoleculeSpec, load_molecule, \
    resolve_dataset
from .hamiltonian import build_hamiltonian, diagonalize, scan_levels
from .transitions import line_list, strength, sum_rule_total, \
    transition_dipole
from .search import QuditPlan, audit_plan, build_qudit, manual_plan, p_loss
from .gates import compile_gate, evolve_three_level, phase_gate, \
    two_photon_gate
from .circuit import reference_plan, run_deutsch
from .budget import circuit_budget, coherence_time_magnetic, \
    coherence_time_stark, gate_frequency_error

__version__ = "0.1.0"

__all__ = [
    "FieldPoint", "MoleculeSpec", "load_molecule", "resolve_dataset",
    "build_hamiltonian", "diagonalize", "scan_levels",
    "line_list", "strength", "sum_rule_total", "transition_dipole",
    "QuditPlan", "audit_plan", "build_qudit", "manual_plan", "p_loss",
    "compile_gate", "evolve_three_level", "phase_gate", "two_photon_gate",
    "reference_plan", "run_deutsch",
    "circuit_budget", "coherence_time_magnetic", "coherence_time_stark",
    "gate_frequency_error",
]
