"""Basis enumeration bookkeeping."""

from quditmol.basis import enumerate_basis, manifold_size


def test_singlet_count(caf_spec, rbcs_spec):
    # (2 I1 + 1)(2 I2 + 1) sum over N of (2 N + 1)
    states = enumerate_basis(rbcs_spec, 1)
    deg = (rbcs_spec.tI1 + 1) * (rbcs_spec.tI2 + 1)
    assert len(states) == deg * (1 + 3)
    assert len(enumerate_basis(rbcs_spec, 2)) == deg * (1 + 3 + 5)


def test_doublet_count(caf_spec):
    deg = (caf_spec.tS + 1) * (caf_spec.tI1 + 1) * (caf_spec.tI2 + 1)
    assert len(enumerate_basis(caf_spec, 1)) == deg * 4
    assert len(enumerate_basis(caf_spec, 3)) == deg * 16


def test_manifold_size(caf_spec, rbcs_spec):
    for spec in (caf_spec, rbcs_spec):
        for n in range(3):
            expect = sum(1 for s in enumerate_basis(spec, n)
                         if s.tN == 2 * n)
            assert manifold_size(spec, n) == expect


def test_states_unique_and_consistent(rbcs_spec, caf_spec):
    for spec in (rbcs_spec, caf_spec):
        states = enumerate_basis(spec, 2)
        assert len(set(states)) == len(states)
        for s in states:
            assert abs(s.tmN) <= s.tN
            assert abs(s.tmS) <= spec.tS
            assert abs(s.tmI1) <= spec.tI1
            assert abs(s.tmI2) <= spec.tI2
            assert (s.tN + s.tmN) % 2 == 0


def test_mf_projection(caf_spec):
    for s in enumerate_basis(caf_spec, 1):
        assert s.tMF == s.tmN + s.tmS + s.tmI1 + s.tmI2


def test_canonical_order_is_stable(rbcs_spec):
    a = enumerate_basis(rbcs_spec, 2)
    b = enumerate_basis(rbcs_spec, 2)
    assert a == b
    keys = [(s.tN, s.tMF, s.tmN, s.tmS, s.tmI1, s.tmI2) for s in a]
    assert keys == sorted(keys)
