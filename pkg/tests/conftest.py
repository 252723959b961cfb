import pytest

from quditmol.hamiltonian import diagonalize
from quditmol.molecule import FieldPoint, MoleculeSpec, resolve_dataset

CAF_FIELD = FieldPoint(100.0, 20.0, 0.0)
RBCS_FIELD = FieldPoint(181.5, 5.0, 0.0)


@pytest.fixture(scope="session")
def caf_spec():
    return resolve_dataset("caf")


@pytest.fixture(scope="session")
def rbcs_spec():
    return resolve_dataset("rbcs")


@pytest.fixture(scope="session")
def caf_ctx(caf_spec):
    return diagonalize(caf_spec, CAF_FIELD, 2)


@pytest.fixture(scope="session")
def rbcs_ctx(rbcs_spec):
    return diagonalize(rbcs_spec, RBCS_FIELD, 2)


@pytest.fixture(scope="session")
def caf_plan():
    from quditmol.circuit import reference_plan
    return reference_plan("caf")


@pytest.fixture(scope="session")
def rbcs_plan():
    from quditmol.circuit import reference_plan
    return reference_plan("rbcs")


@pytest.fixture(scope="session")
def rbcs_n1_plan():
    from quditmol.circuit import reference_plan
    return reference_plan("rbcs", variant="N1")


def synthetic_singlet(ti1=3, ti2=1, **overrides):
    """A small fictitious 1-Sigma species for structure-only properties."""
    params = dict(
        name="synthetic-singlet", symmetry="singlet_sigma", tS=0,
        tI1=ti1, tI2=ti2, brot=1234.5, drot=1e-3,
        eqq1=-0.8, eqq2=0.11, c1=2.0e-3, c2=4.2e-4, c3=3.1e-4, c4=9.5e-3,
        g_r=0.005, g1=1.2, g2=-0.4, sigma1=0.0, sigma2=0.0,
        d0=2.0, alpha_parallel=0.02, alpha_perp=0.008)
    params.update(overrides)
    return MoleculeSpec(**params)


def synthetic_doublet(ti2=1, **overrides):
    """A small fictitious 2-Sigma species (nucleus 2 carries the spin)."""
    params = dict(
        name="synthetic-doublet", symmetry="doublet_sigma", tS=1,
        tI1=0, tI2=ti2, brot=9876.0, drot=1e-2,
        gamma_sr=40.0, b_fermi=110.0, c_dipolar=41.0, c_nsr=0.03,
        g_s=2.0023, g_r=-5e-5, g2=5.2, sigma2=0.0,
        d0=3.0, alpha_parallel=0.01, alpha_perp=0.004)
    params.update(overrides)
    return MoleculeSpec(**params)
