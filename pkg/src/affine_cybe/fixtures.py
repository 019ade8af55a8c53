"""Named example inputs shipped with the package."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .lie_core import LieAlgebra
from .rmatrix import Bivector, SymplecticForm, r_from_omega
from . import serialization as ser

FIXTURE_DIR = Path(str(resources.files("affine_cybe") / "fixtures"))


def path(name: str) -> Path:
    return FIXTURE_DIR / name


@lru_cache(maxsize=None)
def algebra(name: str) -> LieAlgebra:
    return ser.algebra_from_json(ser.load_json(path(f"{name}.json")), name)


@dataclass(frozen=True, eq=False)
class Case:
    name: str
    algebra_file: str
    r_file: str | None = None
    omega_file: str | None = None
    nilpotent: bool = False

    @property
    def L(self) -> LieAlgebra:
        return algebra(self.algebra_file.removesuffix(".json"))

    @property
    def omega(self) -> SymplecticForm | None:
        if self.omega_file is None:
            return None
        return ser.omega_from_json(ser.load_json(path(self.omega_file)), self.omega_file)

    @property
    def r(self) -> Bivector:
        if self.omega_file is not None:
            return r_from_omega(self.L, self.omega)
        return ser.bivector_from_json(ser.load_json(path(self.r_file)), self.r_file)

    @property
    def symplectic(self) -> bool:
        return self.omega_file is not None


SYMPLECTIC = (
    Case("aff1", "aff1.json", omega_file="std.json"),
    Case("abelian2", "abelian2.json", omega_file="std.json", nilpotent=True),
    Case("n4", "n4.json", omega_file="n4_omega.json", nilpotent=True),
    Case("aff1x2", "aff1x2.json", omega_file="aff1x2_omega.json"),
)

# dimension 6; kept apart because the 12-dim doubles make exact LSA checks slow
LARGE = (
    Case("aff1xn4", "aff1xn4.json", omega_file="aff1xn4_omega.json"),
)

DEGENERATE = (
    Case("sl2_he", "sl2.json", r_file="he.json"),
    Case("h3_e1e3", "h3.json", r_file="h3_r.json", nilpotent=True),
)

# bivectors that fail the CYBE, kept as negative examples
NON_CYBE = (
    Case("sl2_ef", "sl2.json", r_file="ef.json"),
)

CYBE_CASES = SYMPLECTIC + DEGENERATE
ALL_CASES = CYBE_CASES + LARGE + NON_CYBE
BY_NAME = {c.name: c for c in ALL_CASES}
