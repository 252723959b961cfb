"""Molecule definitions: spectroscopic constants, field points, dataset files.

Constants are stored in the units used throughout the package: energies over h
in MHz, magnetic fields in Gauss, laser intensities in kW cm^-2, dipole
moments in Debye.  Dataset files are TOML with explicit unit suffixes on every
key; spins are stored as doubled integers so half-integers stay exact.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SINGLET = "singlet_sigma"
DOUBLET = "doublet_sigma"

# Bohr/nuclear magnetons over h, in MHz per Gauss.
MU_B_MHZ_PER_G = 1.39962449361
MU_N_MHZ_PER_G = 7.62259323e-4

DATA_DIR = Path(__file__).parent / "data"


class DatasetError(ValueError):
    """Raised when a molecular-constants file violates the schema."""


@dataclass(frozen=True)
class MoleculeSpec:
    """Spectroscopic constants of a 1-Sigma or 2-Sigma diatomic molecule."""

    name: str
    symmetry: str
    tS: int
    tI1: int
    tI2: int
    # rotation, MHz
    brot: float
    drot: float = 0.0
    # 2-Sigma hyperfine constants, MHz
    gamma_sr: float = 0.0      # electron spin-rotation
    b_fermi: float = 0.0       # Fermi contact b_F = b + c/3
    c_dipolar: float = 0.0     # electron-nuclear dipolar c
    c_nsr: float = 0.0         # nuclear spin-rotation (spin-carrying nucleus)
    # 1-Sigma hyperfine constants, MHz
    eqq1: float = 0.0          # nuclear electric quadrupole, nucleus 1
    eqq2: float = 0.0
    c1: float = 0.0            # nuclear spin-rotation, nucleus 1
    c2: float = 0.0
    c3: float = 0.0            # tensor nuclear spin-spin
    c4: float = 0.0            # scalar nuclear spin-spin
    # g-factors (dimensionless) and shieldings
    g_s: float = 0.0
    g_r: float = 0.0
    g1: float = 0.0
    g2: float = 0.0
    sigma1: float = 0.0
    sigma2: float = 0.0
    # electric dipole moment, Debye
    d0: float = 0.0
    # dynamic polarizabilities at the trap wavelength, MHz per kW cm^-2
    alpha_parallel: float = 0.0
    alpha_perp: float = 0.0
    # operating-point and noise defaults carried by the dataset
    defaults: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.symmetry not in (SINGLET, DOUBLET):
            raise DatasetError(f"unknown symmetry {self.symmetry!r}")
        if self.symmetry == SINGLET and self.tS != 0:
            raise DatasetError("singlet_sigma requires S = 0")
        if self.symmetry == DOUBLET and self.tS != 1:
            raise DatasetError("doublet_sigma requires S = 1/2")
        if min(self.tI1, self.tI2) < 0:
            raise DatasetError("nuclear spins must be non-negative")
        if not self.brot > 0:
            raise DatasetError("rotational constant must be positive")
        for name in ("alpha_parallel", "alpha_perp"):
            value = getattr(self, name)
            if not value == value or value in (float("inf"), -float("inf")):
                raise DatasetError(f"{name} must be finite")

    @property
    def alpha_iso(self) -> float:
        """Isotropic polarizability (alpha_par + 2 alpha_perp)/3."""
        return (self.alpha_parallel + 2.0 * self.alpha_perp) / 3.0

    @property
    def alpha_aniso(self) -> float:
        """Anisotropic polarizability (2/3)(alpha_par - alpha_perp)."""
        return 2.0 / 3.0 * (self.alpha_parallel - self.alpha_perp)


@dataclass(frozen=True)
class FieldPoint:
    """External fields: B along z, laser intensity and polarization angle."""

    b_gauss: float = 0.0
    i_kwcm2: float = 0.0
    pol_angle: float = 0.0  # laser polarization angle to B, radians

    def __post_init__(self):
        if self.b_gauss < 0:
            raise ValueError("magnetic field must be >= 0")
        if self.i_kwcm2 < 0:
            raise ValueError("laser intensity must be >= 0")


_REQUIRED_SECTIONS = ("schema", "species", "rotation", "zeeman", "dipole", "polarizability")

_DOUBLET_HF = {"gamma_MHz": "gamma_sr", "bF_MHz": "b_fermi", "c_MHz": "c_dipolar",
               "cI_MHz": "c_nsr"}
_SINGLET_HF = {"eqq1_MHz": "eqq1", "eqq2_MHz": "eqq2", "c1_MHz": "c1",
               "c2_MHz": "c2", "c3_MHz": "c3", "c4_MHz": "c4"}


def load_molecule(path) -> MoleculeSpec:
    """Parse and validate a molecular-constants TOML file."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise DatasetError(f"{path}: not valid TOML: {exc}") from exc

    for section in _REQUIRED_SECTIONS:
        if section not in doc:
            raise DatasetError(f"{path}: missing [{section}] section")
    schema = doc["schema"]
    if schema.get("format") != "quditmol-molecule":
        raise DatasetError(f"{path}: unknown schema format {schema.get('format')!r}")

    sp = doc["species"]
    symmetry = sp.get("symmetry")
    kwargs = dict(
        name=sp.get("name", path.stem),
        symmetry=symmetry,
        tS=int(sp.get("twice_S", 0)),
        tI1=int(sp.get("twice_I1", 0)),
        tI2=int(sp.get("twice_I2", 0)),
        brot=float(doc["rotation"].get("brot_MHz", 0.0)),
        drot=float(doc["rotation"].get("d_MHz", 0.0)),
        d0=float(doc["dipole"].get("d0_debye", 0.0)),
        alpha_parallel=float(doc["polarizability"]["alpha_parallel_MHz_per_kWcm2"]),
        alpha_perp=float(doc["polarizability"]["alpha_perp_MHz_per_kWcm2"]),
        defaults=doc.get("defaults", {}),
    )

    hf = doc.get("hyperfine", {})
    table = _DOUBLET_HF if symmetry == DOUBLET else _SINGLET_HF
    unknown = set(hf) - set(table)
    if unknown:
        raise DatasetError(
            f"{path}: hyperfine keys {sorted(unknown)} not valid for {symmetry}")
    for key, attr in table.items():
        if key in hf:
            kwargs[attr] = float(hf[key])

    zee = doc["zeeman"]
    for key, attr in (("g_S", "g_s"), ("g_r", "g_r"), ("g1", "g1"), ("g2", "g2"),
                      ("sigma1", "sigma1"), ("sigma2", "sigma2")):
        if key in zee:
            kwargs[attr] = float(zee[key])
    if symmetry == SINGLET and kwargs.get("g_s"):
        raise DatasetError(f"{path}: g_S given for a singlet_sigma molecule")

    try:
        return MoleculeSpec(**kwargs)
    except TypeError as exc:
        raise DatasetError(f"{path}: {exc}") from exc


def builtin_dataset(name: str) -> Path:
    """Path of a dataset shipped with the package ('caf' or 'rbcs')."""
    path = DATA_DIR / f"{name.lower()}.toml"
    if not path.exists():
        known = sorted(p.stem for p in DATA_DIR.glob("*.toml"))
        raise DatasetError(f"no built-in dataset {name!r}; known: {known}")
    return path


def resolve_dataset(name_or_path) -> MoleculeSpec:
    """Load a molecule from a file path or a built-in dataset name."""
    p = Path(name_or_path)
    if p.exists():
        return load_molecule(p)
    return load_molecule(builtin_dataset(str(name_or_path)))
