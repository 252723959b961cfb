"""Deutsch-algorithm circuit on the shipped four-level plans."""

import math

import numpy as np
import pytest

from quditmol.circuit import (DEUTSCH_MAPPINGS, boolean_oracle_table,
                              deutsch_gates, logical_unitary,
                              oracle_classification, reference_plan,
                              run_deutsch)

ORACLES = [1, 2, 3, 4]


def test_oracle_tables():
    assert [boolean_oracle_table(i) for i in ORACLES] == \
        [(0, 0), (1, 1), (1, 0), (0, 1)]
    assert [oracle_classification(i) for i in ORACLES] == \
        ["constant", "constant", "balanced", "balanced"]
    with pytest.raises(ValueError):
        boolean_oracle_table(5)


def test_logical_circuit_is_deterministic():
    """Measured through the 4x4 product, P(|2>) is exactly 1 for the
    constant functions and 0 for the balanced ones."""
    start = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
    for i in ORACLES:
        u = logical_unitary(i)
        p2 = abs((u @ start)[1]) ** 2
        expect = 1.0 if oracle_classification(i) == "constant" else 0.0
        assert p2 == pytest.approx(expect, abs=1e-12)


def test_oracle_unitaries_induce_truth_tables():
    """Each F_i acts as |x>|y> -> |x>|y XOR f(x)>.  F_3 and F_4 realize
    each other's tables (swap documented in the module); both are
    balanced, so verdicts are unaffected."""
    induced = {1: (0, 0), 2: (1, 1), 3: (0, 1), 4: (1, 0)}
    for i in ORACLES:
        f = induced[i]
        u = np.eye(4, dtype=complex)
        from quditmol.circuit import _ORACLES, two_photon_gate
        for _, k, l, zeta, phi in _ORACLES[i]:
            g = np.eye(4, dtype=complex)
            g[np.ix_([k - 1, l - 1], [k - 1, l - 1])] = \
                two_photon_gate(zeta, phi).matrix
            u = g @ u
        for x in (0, 1):
            for y in (0, 1):
                src = 2 * x + y
                dst = 2 * x + (y ^ f[x])
                col = np.abs(u[:, src])
                assert col[dst] == pytest.approx(1.0, abs=1e-12)


def test_stage_list():
    names = [name for name, _ in deutsch_gates(3)]
    assert names == ["H_A", "H_B", "F_3", "H_A", "G_M"]
    assert deutsch_gates(1)[2][1] == []


@pytest.mark.parametrize("oracle", ORACLES)
def test_run_deutsch_caf(caf_plan, oracle):
    res = run_deutsch(caf_plan, oracle)
    expect = 1.0 if res.classification == "constant" else 0.0
    assert res.p2 == pytest.approx(expect, abs=1e-10)
    assert res.correct
    assert res.pulse_count == len(res.schedule.pulses)
    assert res.total_time == pytest.approx(
        sum(p.duration for p in res.schedule.pulses))


@pytest.mark.parametrize("oracle", ORACLES)
def test_run_deutsch_rbcs(rbcs_plan, oracle):
    res = run_deutsch(rbcs_plan, oracle)
    expect = 1.0 if res.classification == "constant" else 0.0
    assert res.p2 == pytest.approx(expect, abs=1e-10)
    assert res.correct


def test_run_deutsch_n1_variant(rbcs_n1_plan):
    res = run_deutsch(rbcs_n1_plan, 1)
    assert res.p2 == pytest.approx(1.0, abs=1e-10)
    assert res.total_time == pytest.approx(14.55e-3, rel=0.01)


def test_reference_run_times(caf_plan, rbcs_plan):
    """Identity-oracle wall-clock: ~130 us for the fast plan, ~11 ms for
    the slow one."""
    caf = run_deutsch(caf_plan, 1)
    assert caf.total_time == pytest.approx(129.34e-6, rel=0.01)
    assert caf.pulse_count == 7
    rbcs = run_deutsch(rbcs_plan, 1)
    assert rbcs.total_time == pytest.approx(11.155e-3, rel=0.01)
    assert rbcs.pulse_count == 11


def test_balanced_oracle_needs_routing(rbcs_plan):
    """On the N=0 plan the (1,3)/(1,4) logical pairs are unconnected, so
    balanced runs compile extra routing pulses."""
    f1 = run_deutsch(rbcs_plan, 1)
    f3 = run_deutsch(rbcs_plan, 3)
    assert f3.pulse_count > f1.pulse_count


def test_explicit_mapping_matches_default(caf_plan):
    res = run_deutsch(caf_plan, 2, mapping=DEUTSCH_MAPPINGS["40Ca19F"])
    assert res.p2 == pytest.approx(1.0, abs=1e-10)


def test_bad_mapping_rejected(caf_plan):
    with pytest.raises(ValueError):
        run_deutsch(caf_plan, 1, mapping={"(1,0,0)": 1})


def test_norm_preserved(caf_plan):
    res = run_deutsch(caf_plan, 4)
    u = np.eye(len(caf_plan.levels) + len(caf_plan.aux_levels),
               dtype=complex)
    for _, compiled in res.stages:
        u = compiled.unitary.matrix @ u
    assert np.abs(u @ u.conj().T - np.eye(len(u))).max() < 1e-10
