"""JSON encoding of algebras, bivectors, forms, LSAs and reports.

Rationals travel as "p/q" strings; bracket and product indices are 0-based.
"""

from __future__ import annotations

import hashlib
import json
import itertools
from pathlib import Path

import numpy as np

from . import linalg as la
from .affine_lsa import LSA
from .lie_core import AlgebraError, LieAlgebra
from .poisson_poly import PolyPoisson
from .rmatrix import Bivector, SymplecticForm

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed input file; the message carries the location when known."""


def _matrix(m) -> list:
    return [[la.fmt(v) for v in row] for row in np.asarray(m)]


def _parse_matrix(obj, key: str, where: str) -> np.ndarray:
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: expected an object with key {key!r}")
    try:
        m = la.qarray(obj[key])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad rational entry ({exc})") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"{where}: {key!r} must be a square matrix")
    return m


def algebra_to_json(L: LieAlgebra) -> dict:
    brackets = []
    for i, j in itertools.combinations(range(L.dim), 2):
        coeffs = {str(k): la.fmt(v) for k, v in enumerate(L.c[i, j]) if v != 0}
        if coeffs:
            brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {"dim": L.dim, "basis": list(L.labels), "brackets": brackets}


def algebra_from_json(obj, where: str = "algebra") -> LieAlgebra:
    try:
        dim = int(obj["dim"])
        basis = obj.get("basis", [])
        table = {}
        for n, b in enumerate(obj.get("brackets", [])):
            i, j = int(b["i"]), int(b["j"])
            if not i < j:
                raise InputError(f"{where}: brackets[{n}] must list i < j")
            table[(i, j)] = {int(k): la.frac(v) for k, v in b["coeffs"].items()}
        for (i, j), coeffs in table.items():
            if any(not 0 <= k < dim for k in coeffs):
                raise InputError(f"{where}: coefficient index out of range in bracket ({i}, {j})")
        return LieAlgebra.from_brackets(dim, table, basis)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
        raise InputError(f"{where}: {type(exc).__name__}: {exc}") from None


def bivector_to_json(r: Bivector) -> dict:
    return {"r": _matrix(r.r)}


def bivector_from_json(obj, where: str = "bivector") -> Bivector:
    return Bivector(_parse_matrix(obj, "r", where))


def omega_to_json(w: SymplecticForm) -> dict:
    return {"omega": _matrix(w.omega)}


def omega_from_json(obj, where: str = "omega") -> SymplecticForm:
    try:
        return SymplecticForm(_parse_matrix(obj, "omega", where))
    except AlgebraError as exc:
        raise InputError(f"{where}: {exc}") from None


def lsa_to_json(P: LSA) -> dict:
    products = []
    for i, j in itertools.product(range(P.dim), repeat=2):
        coeffs = {str(k): la.fmt(v) for k, v in enumerate(P.a[i, j]) if v != 0}
        if coeffs:
            products.append({"i": i, "j": j, "coeffs": coeffs})
    return {"dim": P.dim, "basis": list(P.labels), "products": products}


def lsa_from_json(obj) -> LSA:
    n = int(obj["dim"])
    a = la.zeros(n, n, n)
    for p in obj["products"]:
        for k, v in p["coeffs"].items():
            a[int(p["i"]), int(p["j"]), int(k)] = la.frac(v)
    return LSA(a, tuple(obj.get("basis", ())))


def poisson_to_json(P: PolyPoisson) -> dict:
    return P.as_dict()


def load_json(path: str | Path):
    """Read a JSON file, turning syntax errors into InputError with line/column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
