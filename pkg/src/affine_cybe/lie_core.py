"""Finite-dimensional Lie algebras given by exact structure constants.

Conventions used everywhere in the package:

* ``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.
* ``ad(x)`` is the matrix with ``ad(x) @ y == [x, y]``.
* The coadjoint action is ``<ad*_x a, y> = -<a, [x, y]>``, so the matrix of
  ``ad*_x`` is ``-ad(x).T``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from . import linalg as la


class AlgebraError(ValueError):
    """Raised for inputs that are not valid Lie algebra data."""


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    witness: tuple[int, int, int] | None = None
    value: np.ndarray | None = None

    def as_dict(self) -> dict:
        out: dict = {"ok": self.ok}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["jacobiator"] = [la.fmt(v) for v in self.value]
        return out


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        c = la.normalize(np.asarray(self.c, dtype=object))
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise AlgebraError(f"structure constants must be n x n x n, got {c.shape}")
        n = c.shape[0]
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            if not np.all(c[i, j] == -c[j, i]):
                raise AlgebraError(f"structure constants not antisymmetric at ({i}, {j})")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise AlgebraError("number of basis labels does not match dimension")
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, labels: Sequence[str] = ()) -> "LieAlgebra":
        """Build from ``{(i, j): {k: coeff}}`` listing i<j pairs only."""
        c = la.zeros(dim, dim, dim)
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim) or i == j:
                raise AlgebraError(f"bad bracket index pair ({i}, {j})")
            for k, v in coeffs.items():
                c[i, j, k] += la.frac(v)
                c[j, i, k] -= la.frac(v)
        return cls(c, tuple(labels))

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(la.zeros(dim, dim, dim))

    def ad(self, x) -> np.ndarray:
        x = self._vec(x)
        return la.normalize(np.einsum("i,ijk->kj", x, self.c))

    def coad(self, x) -> np.ndarray:
        return la.normalize(-self.ad(x).T)

    def basis_vector(self, i: int) -> np.ndarray:
        v = la.zeros(self.dim)
        v[i] = Fraction(1)
        return v

    @cached_property
    def jacobi(self) -> JacobiReport:
        return jacobi_check(self)

    def require_valid(self) -> None:
        rep = self.jacobi
        if not rep.ok:
            raise AlgebraError(f"Jacobi identity fails on basis triple {rep.witness}")

    def _vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=object)
        if x.shape != (self.dim,):
            raise AlgebraError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        return x


@dataclass(frozen=True, eq=False)
class PairedAlgebra:
    """A Lie algebra together with a symmetric bilinear form."""

    alg: LieAlgebra
    form: np.ndarray

    def __post_init__(self):
        form = la.normalize(np.asarray(self.form, dtype=object))
        if form.shape != (self.alg.dim, self.alg.dim):
            raise AlgebraError("form has the wrong shape")
        if not np.all(form == form.T):
            raise AlgebraError("form is not symmetric")
        form.flags.writeable = False
        object.__setattr__(self, "form", form)

    def pair(self, x, y) -> Fraction:
        return la.frac(np.asarray(x, dtype=object) @ self.form @ np.asarray(y, dtype=object))

    def invariance_witness(self) -> tuple[int, int, int] | None:
        """First basis triple violating <[x,y],z> + <y,[x,z]> = 0, if any."""
        n = self.alg.dim
        for i in range(n):
            adx = self.alg.ad(self.alg.basis_vector(i))
            # <ad_x y, z> + <y, ad_x z> = (ad_x^T B + B ad_x)[y, z]
            m = la.normalize(adx.T @ self.form + self.form @ adx)
            for j, k in itertools.product(range(n), repeat=2):
                if m[j, k] != 0:
                    return (i, j, k)
        return None

    def is_orthogonal(self) -> bool:
        return self.invariance_witness() is None

    def is_isotropic(self, basis: np.ndarray) -> bool:
        basis = np.asarray(basis, dtype=object)
        return la.is_zero(basis @ self.form @ basis.T) if basis.shape[0] else True


def bracket(L: LieAlgebra, x, y) -> np.ndarray:
    x, y = L._vec(x), L._vec(y)
    return la.normalize(np.einsum("i,j,ijk->k", x, y, L.c))


def coadjoint(L: LieAlgebra, x, alpha) -> np.ndarray:
    """ad*_x alpha, with <ad*_x alpha, y> = -<alpha, [x, y]>."""
    return la.normalize(L.coad(x) @ L._vec(alpha))


def jacobi_check(L: LieAlgebra) -> JacobiReport:
    n = L.dim
    c = L.c
    # J[i,j,k,m] = coefficient of e_m in [[e_i,e_j],e_k] + cyclic
    t = np.einsum("ijl,lkm->ijkm", c, c)
    jac = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
    for i, j, k in itertools.combinations(range(n), 3):
        v = jac[i, j, k]
        if not la.is_zero(v):
            return JacobiReport(False, (i, j, k), la.normalize(v))
    return JacobiReport(True)


def ad_matrices(L: LieAlgebra) -> list[np.ndarray]:
    return [L.ad(L.basis_vector(i)) for i in range(L.dim)]


def center(L: LieAlgebra) -> np.ndarray:
    """RREF basis of Z(L), as rows."""
    # x is central iff [e_i, x] = 0 for all i
    stacked = np.concatenate(ad_matrices(L), axis=0)
    return la.nullspace(stacked)


def unimodular(L: LieAlgebra) -> bool:
    return all(la.trace(a) == 0 for a in ad_matrices(L))


def bracket_span(L: LieAlgebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    vecs = [bracket(L, x, y) for x in a for y in b]
    return la.span(vecs, L.dim)


def derived_series(L: LieAlgebra) -> list[np.ndarray]:
    """Subspaces L, [L,L], [[L,L],[L,L]], ... up to stabilisation."""
    current = la.eye(L.dim)
    series = [current]
    while current.shape[0]:
        nxt = bracket_span(L, current, current)
        if nxt.shape[0] == current.shape[0]:
            break
        series.append(nxt)
        current = nxt
    return series


def solvable(L: LieAlgebra) -> bool:
    return derived_series(L)[-1].shape[0] == 0


def is_ideal(L: LieAlgebra, sub: np.ndarray) -> bool:
    return all(la.in_span(bracket(L, L.basis_vector(i), v), sub) for i in range(L.dim) for v in sub)


def is_subalgebra(L: LieAlgebra, sub: np.ndarray) -> bool:
    return all(la.in_span(bracket(L, x, y), sub) for x in sub for y in sub)


def subalgebra(L: LieAlgebra, sub: np.ndarray) -> LieAlgebra:
    """Restriction of the bracket to a subalgebra, in the coordinates of its RREF basis."""
    sub, pivots = la.rref(sub)
    if not is_subalgebra(L, sub):
        raise AlgebraError("subspace is not closed under the bracket")
    m = sub.shape[0]
    c = la.zeros(m, m, m)
    for a, b in itertools.product(range(m), repeat=2):
        v = bracket(L, sub[a], sub[b])
        # RREF rows: the coordinate on row p is the entry at its pivot column
        c[a, b] = [v[p] for p in pivots]
    return LieAlgebra(c)


def quotient(L: LieAlgebra, ideal: np.ndarray) -> LieAlgebra:
    """L / ideal, on the complement spanned by the non-pivot basis vectors."""
    ideal, pivots = la.rref(ideal) if np.asarray(ideal).shape[0] else (la.zeros(0, L.dim), [])
    if not is_ideal(L, ideal):
        raise AlgebraError("subspace is not an ideal")
    free = [j for j in range(L.dim) if j not in pivots]
    m = len(free)
    if m == 0:
        raise AlgebraError("quotient by the whole algebra is zero-dimensional")
    c = la.zeros(m, m, m)
    for a, b in itertools.product(range(m), repeat=2):
        v, _ = la.reduce_mod(bracket(L, L.basis_vector(free[a]), L.basis_vector(free[b])), ideal)
        c[a, b] = [v[j] for j in free]
    return LieAlgebra(c, tuple(L.labels[j] for j in free))


def change_basis(L: LieAlgebra, P: np.ndarray) -> LieAlgebra:
    """Structure constants in the basis f_a = sum_i P[i, a] e_i."""
    P = la.normalize(np.asarray(P, dtype=object))
    return LieAlgebra(la.transform3(L.c, P))


def direct_sum(A: LieAlgebra, B: LieAlgebra) -> LieAlgebra:
    n, m = A.dim, B.dim
    c = la.zeros(n + m, n + m, n + m)
    c[:n, :n, :n] = A.c
    c[n:, n:, n:] = B.c
    return LieAlgebra(c, A.labels + B.labels)


@lru_cache(maxsize=64)
def cotangent_algebra(L: LieAlgebra) -> PairedAlgebra:
    """t*L = L* x| L, coordinates (alpha, x) with alpha first.

    [(a, x), (b, y)] = (ad*_x b - ad*_y a, [x, y]) and
    <(a, x), (b, y)> = a(y) + b(x).
    """
    L.require_valid()
    n = L.dim
    c = la.zeros(2 * n, 2 * n, 2 * n)
    coads = [L.coad(L.basis_vector(i)) for i in range(n)]
    for i in range(n):
        # [x_i, x_j] in the second block
        c[n + i, n:, n:] = L.c[i]
        # [(0, e_i), (e_j*, 0)] = (ad*_{e_i} e_j*, 0)
        for j in range(n):
            col = coads[i][:, j]
            c[n + i, j, :n] = col
            c[j, n + i, :n] = -col
    form = la.zeros(2 * n, 2 * n)
    for i in range(n):
        form[i, n + i] = form[n + i, i] = Fraction(1)
    dual_labels = tuple(f"{s}*" for s in L.labels)
    return PairedAlgebra(LieAlgebra(c, dual_labels + L.labels), form)
