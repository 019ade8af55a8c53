"""Skew bivectors, the classical Yang-Baxter equation and symplectic forms.

A bivector is stored as the matrix of the map r: L* -> L, i.e.
``r_sharp(alpha) = r @ alpha``, and ``r(alpha, beta) = <beta, r(alpha)>``.
A symplectic form is stored by its values ``omega[i, j] = omega(e_i, e_j)``.
The flat map ``q(x) = omega(x, .)`` then has matrix ``omega.T`` and
``r = q^{-1}``, so that ``r @ q == identity``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .lie_core import AlgebraError, LieAlgebra, PairedAlgebra, bracket, center, cotangent_algebra


@dataclass(frozen=True, eq=False)
class Bivector:
    r: np.ndarray

    def __post_init__(self):
        r = la.normalize(np.asarray(self.r, dtype=object))
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise AlgebraError("bivector must be a square matrix")
        r.flags.writeable = False
        object.__setattr__(self, "r", r)

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    @property
    def skew(self) -> bool:
        return bool(np.all(self.r == -self.r.T))

    def sharp(self, alpha) -> np.ndarray:
        return la.normalize(self.r @ np.asarray(alpha, dtype=object))

    def __call__(self, alpha, beta) -> Fraction:
        return la.frac(np.asarray(beta, dtype=object) @ self.sharp(alpha))

    @property
    def invertible(self) -> bool:
        return la.rank(self.r) == self.dim

    def kernel(self) -> np.ndarray:
        return la.nullspace(self.r)

    def image(self) -> np.ndarray:
        return la.span(self.r.T, self.dim)

    @classmethod
    def wedge(cls, x, y) -> "Bivector":
        """x ^ y, with r_sharp(alpha) = alpha(x) y - alpha(y) x."""
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        return cls(la.normalize(np.outer(y, x) - np.outer(x, y)))


@dataclass(frozen=True, eq=False)
class SymplecticForm:
    omega: np.ndarray

    def __post_init__(self):
        w = la.normalize(np.asarray(self.omega, dtype=object))
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise AlgebraError("omega must be a square matrix")
        if not np.all(w == -w.T):
            raise AlgebraError("omega is not skew-symmetric")
        w.flags.writeable = False
        object.__setattr__(self, "omega", w)

    @property
    def dim(self) -> int:
        return self.omega.shape[0]

    def __call__(self, x, y) -> Fraction:
        return la.frac(np.asarray(x, dtype=object) @ self.omega @ np.asarray(y, dtype=object))

    @property
    def nondegenerate(self) -> bool:
        return la.rank(self.omega) == self.dim


@dataclass(frozen=True)
class SchoutenReport:
    cybe_ok: bool
    values: dict  # (i, j, k) with i<j<k -> [r, r](e_i*, e_j*, e_k*)

    def as_dict(self) -> dict:
        nonzero = {f"{i},{j},{k}": la.fmt(v) for (i, j, k), v in self.values.items() if v != 0}
        return {"cybe_ok": self.cybe_ok, "nonzero_components": nonzero}


def _check_dims(L: LieAlgebra, r: Bivector) -> None:
    if r.dim != L.dim:
        raise AlgebraError(f"bivector has dim {r.dim}, algebra has dim {L.dim}")


def schouten_rr(L: LieAlgebra, r: Bivector) -> SchoutenReport:
    """All components [r, r](e_i*, e_j*, e_k*), i<j<k, and the CYBE verdict."""
    _check_dims(L, r)
    L.require_valid()
    n = L.dim
    images = r.r.T  # images[i] = r(e_i*)
    # B[i, j, m] = <[r(e_i*), r(e_j*)], e_m*>
    B = np.einsum("ia,jb,abm->ijm", images, images, L.c)
    values = {}
    for i, j, k in itertools.combinations(range(n), 3):
        values[(i, j, k)] = la.frac(B[i, j, k] + B[j, k, i] + B[k, i, j])
    return SchoutenReport(all(v == 0 for v in values.values()), values)


def schouten_tensor(L: LieAlgebra, r: Bivector) -> np.ndarray:
    """[r, r] as a fully antisymmetric array T[i, j, k] in the basis of L."""
    n = L.dim
    T = la.zeros(n, n, n)
    for (i, j, k), v in schouten_rr(L, r).values.items():
        for idx, sign in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                          ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            T[idx] = sign * v
    return T


def schouten_invariant(L: LieAlgebra, r: Bivector) -> bool:
    """Is [r, r] annihilated by ad_x on the third exterior power, for every x?

    This is exactly when the dual bracket, and hence the double, is a Lie
    algebra; it is weaker than the CYBE.
    """
    T = schouten_tensor(L, r)
    for x in range(L.dim):
        A = L.ad(L.basis_vector(x))
        S = (np.einsum("im,mjk->ijk", A, T) + np.einsum("jm,imk->ijk", A, T)
             + np.einsum("km,ijm->ijk", A, T))
        if not la.is_zero(S):
            return False
    return True


def dual_bracket(L: LieAlgebra, r: Bivector) -> LieAlgebra:
    """(L*, [a, b]_r) with [a, b]_r = ad*_{r(a)} b - ad*_{r(b)} a.

    Returned unconditionally; it satisfies Jacobi whenever r solves the CYBE
    and callers must consult ``.jacobi`` otherwise.
    """
    _check_dims(L, r)
    n = L.dim
    coads = [L.coad(r.sharp(L.basis_vector(i))) for i in range(n)]
    c = la.zeros(n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        c[i, j] = coads[i][:, j] - coads[j][:, i]
    return LieAlgebra(la.normalize(c), tuple(f"{s}*" for s in L.labels))


def dual_coad(dual: LieAlgebra, alpha) -> np.ndarray:
    """Matrix of ad*_alpha acting on L = (L*)*: <ad*_a y, b> = -<[a, b], y>."""
    return dual.coad(alpha)


def omega_closed_witness(L: LieAlgebra, w: SymplecticForm) -> tuple[int, int, int] | None:
    e = L.basis_vector
    for i, j, k in itertools.combinations(range(L.dim), 3):
        s = w(bracket(L, e(i), e(j)), e(k)) + w(bracket(L, e(j), e(k)), e(i)) + w(bracket(L, e(k), e(i)), e(j))
        if s != 0:
            return (i, j, k)
    return None


def check_symplectic(L: LieAlgebra, w: SymplecticForm) -> None:
    if w.dim != L.dim:
        raise AlgebraError(f"omega has dim {w.dim}, algebra has dim {L.dim}")
    L.require_valid()
    if not w.nondegenerate:
        raise AlgebraError("omega is singular")
    bad = omega_closed_witness(L, w)
    if bad is not None:
        raise AlgebraError(f"omega is not closed (fails on basis triple {bad})")


def q_map(w: SymplecticForm) -> np.ndarray:
    """Matrix of q: L -> L*, q(x) = omega(x, .)."""
    return la.normalize(w.omega.T.copy())


def r_from_omega(L: LieAlgebra, w: SymplecticForm) -> Bivector:
    check_symplectic(L, w)
    r = Bivector(la.inverse(q_map(w)))
    if not schouten_rr(L, r).cybe_ok:
        raise AssertionError("inverse of a closed symplectic form failed the CYBE")
    return r


def omega_from_r(r: Bivector) -> SymplecticForm:
    """Inverse construction: omega(x, y) = <r^{-1}(x), y>."""
    return SymplecticForm(la.inverse(r.r).T)


@dataclass(frozen=True)
class CenterReport:
    ok: bool
    defect_zero: bool
    witness: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {"ok": self.ok, "defect_zero": self.defect_zero,
                "witness": list(self.witness) if self.witness else None}


def defect(L: LieAlgebra, r: Bivector, dual: LieAlgebra, i: int, j: int) -> np.ndarray:
    """r([e_i*, e_j*]_dual) - [r(e_i*), r(e_j*)]."""
    a, b = L.basis_vector(i), L.basis_vector(j)
    return la.normalize(r.sharp(bracket(dual, a, b)) - bracket(L, r.sharp(a), r.sharp(b)))


def center_condition(L: LieAlgebra, r: Bivector, dual: LieAlgebra | None = None) -> CenterReport:
    """Does the defect r([a,b]_*) - [r(a), r(b)] take values in Z(L)?"""
    dual = dual if dual is not None else dual_bracket(L, r)
    z = center(L)
    all_zero = True
    for i, j in itertools.combinations(range(L.dim), 2):
        d = defect(L, r, dual, i, j)
        if not la.is_zero(d):
            all_zero = False
            if not la.in_span(d, z):
                return CenterReport(False, False, (i, j))
    return CenterReport(True, all_zero)


@dataclass(frozen=True)
class GraphReport:
    isotropic: bool
    lagrangian: bool
    subalgebra: bool
    witness: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {"isotropic": self.isotropic, "lagrangian": self.lagrangian,
                "subalgebra": self.subalgebra, "witness": list(self.witness) if self.witness else None}


def graph_basis(r: Bivector) -> np.ndarray:
    """Rows (e_i*, r(e_i*)) in the (alpha, x) coordinates of t*L."""
    n = r.dim
    return np.concatenate([la.eye(n), r.r.T], axis=1)


def graph_check(L: LieAlgebra, r: Bivector) -> GraphReport:
    """Isotropy, lagrangianity and closure of graph(r) inside t*L.

    Closure is decided directly in t*L: each bracket of graph vectors must
    be a vector (gamma, r(gamma)), which is independent of the CYBE route.
    """
    _check_dims(L, r)
    T = cotangent_algebra(L)
    G = graph_basis(r)
    n = L.dim
    iso = T.is_isotropic(G)
    lag = iso and la.rank(G) == n
    witness = None
    for i, j in itertools.combinations(range(n), 2):
        v = bracket(T.alg, G[i], G[j])
        if not np.all(r.sharp(v[:n]) == v[n:]):
            witness = (i, j)
            break
    return GraphReport(iso, lag, witness is None, witness)


@dataclass(frozen=True)
class IsoReport:
    """Certification of a linear map between two paired Lie algebras."""

    homomorphism: bool
    isometry: bool
    extra: dict = field(default_factory=dict)
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.homomorphism and self.isometry and all(self.extra.values())

    def as_dict(self) -> dict:
        return {"ok": self.ok, "homomorphism": self.homomorphism, "isometry": self.isometry,
                **self.extra, "witness": list(self.witness) if self.witness else None}


def certify_map(phi: np.ndarray, src: PairedAlgebra, dst: PairedAlgebra) -> IsoReport:
    """Check phi[src -> dst] is a bracket homomorphism and preserves pairings."""
    m = src.alg.dim
    witness = None
    for i, j in itertools.combinations(range(m), 2):
        a, b = phi[:, i], phi[:, j]
        lhs = la.normalize(phi @ bracket(src.alg, src.alg.basis_vector(i), src.alg.basis_vector(j)))
        if not np.all(lhs == bracket(dst.alg, a, b)):
            witness = (i, j)
            break
    iso = bool(np.all(la.normalize(phi.T @ dst.form @ phi) == src.form))
    return IsoReport(witness is None, iso, witness=witness)


def _double_paired(L: LieAlgebra, r: Bivector, dual_first: bool) -> PairedAlgebra:
    from .double_manin import build_double

    D = build_double(L, r)
    if not dual_first:
        return D.paired
    n = L.dim
    perm = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    c = D.paired.alg.c[np.ix_(perm, perm, perm)]
    form = D.paired.form[np.ix_(perm, perm)]
    labels = tuple(D.paired.alg.labels[p] for p in perm)
    return PairedAlgebra(LieAlgebra(c, labels), form)


def theta_matrix(r: Bivector) -> np.ndarray:
    """theta(alpha, x) = (alpha, r(alpha) + x) in (alpha, x) coordinates."""
    n = r.dim
    top = np.concatenate([la.eye(n), la.zeros(n, n)], axis=1)
    bottom = np.concatenate([r.r, la.eye(n)], axis=1)
    return np.concatenate([top, bottom], axis=0)


def theta_iso(L: LieAlgebra, r: Bivector) -> IsoReport:
    """Certify theta: D(r) -> t*L is a Manin isomorphism carrying L*(r) onto graph(r)."""
    _check_dims(L, r)
    src = _double_paired(L, r, dual_first=True)
    dst = cotangent_algebra(L)
    theta = theta_matrix(r)
    rep = certify_map(theta, src, dst)
    n = L.dim
    image = la.span(theta[:, :n].T, 2 * n)
    onto_graph = la.same_subspace(image, la.span(graph_basis(r), 2 * n))
    return IsoReport(rep.homomorphism, rep.isometry, {"dual_onto_graph": onto_graph}, rep.witness)


def random_bivector(n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> Bivector:
    r = la.zeros(n, n)
    for i, j in itertools.combinations(range(n), 2):
        v = Fraction(rng.randint(lo, hi))
        r[i, j], r[j, i] = v, -v
    return Bivector(r)
