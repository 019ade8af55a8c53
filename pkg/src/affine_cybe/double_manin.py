"""The double Lie algebra D = L + L*, its affine and complex structures.

Coordinates on the double are (x, alpha) with x first; the cotangent
algebra used as the target of Xi is reordered the same way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .affine_lsa import LSA, compatible, dual_lsa, lsa_check, symplectic_lsa
from .lie_core import (
    AlgebraError,
    LieAlgebra,
    PairedAlgebra,
    bracket,
    cotangent_algebra,
    jacobi_check,
    solvable,
    unimodular,
)
from .rmatrix import (
    Bivector,
    IsoReport,
    SymplecticForm,
    certify_map,
    dual_bracket,
    omega_from_r,
    q_map,
    r_from_omega,
    schouten_rr,
)


def hyperbolic_form(n: int) -> np.ndarray:
    form = la.zeros(2 * n, 2 * n)
    for i in range(n):
        form[i, n + i] = form[n + i, i] = Fraction(1)
    return form


@dataclass(frozen=True, eq=False)
class DoubleAlgebra:
    paired: PairedAlgebra
    n: int
    cybe_ok: bool
    dual: LieAlgebra

    @property
    def alg(self) -> LieAlgebra:
        return self.paired.alg

    def checks(self) -> dict:
        n = self.n
        g_half = np.concatenate([la.eye(n), la.zeros(n, n)], axis=1)
        d_half = np.concatenate([la.zeros(n, n), la.eye(n)], axis=1)
        return {
            "cybe_ok": self.cybe_ok,
            "jacobi_ok": self.alg.jacobi.ok,
            "pairing_invariant": self.paired.is_orthogonal(),
            "halves_isotropic": self.paired.is_isotropic(g_half) and self.paired.is_isotropic(d_half),
        }


def build_double(L: LieAlgebra, r: Bivector) -> DoubleAlgebra:
    """[(x,a),(y,b)] = ([x,y] + ad*_a y - ad*_b x, [a,b]_r + ad*_x b - ad*_y a)."""
    L.require_valid()
    n = L.dim
    dual = dual_bracket(L, r)
    c = la.zeros(2 * n, 2 * n, 2 * n)
    c[:n, :n, :n] = L.c
    c[n:, n:, n:] = dual.c
    for i, j in itertools.product(range(n), repeat=2):
        # [(e_i, 0), (0, e_j*)] = (-ad*_{e_j*} e_i, ad*_{e_i} e_j*)
        v = np.concatenate([-dual.coad(dual.basis_vector(j))[:, i], L.coad(L.basis_vector(i))[:, j]])
        c[i, n + j] = v
        c[n + j, i] = -v
    alg = LieAlgebra(la.normalize(c), L.labels + dual.labels)
    return DoubleAlgebra(PairedAlgebra(alg, hyperbolic_form(n)), n, schouten_rr(L, r).cybe_ok, dual)


def semidirect_coadjoint(L: LieAlgebra) -> PairedAlgebra:
    """L x|_{ad*} L* in (x, alpha) order: the cotangent algebra reordered."""
    T = cotangent_algebra(L)
    n = L.dim
    perm = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    c = T.alg.c[np.ix_(perm, perm, perm)]
    labels = tuple(T.alg.labels[p] for p in perm)
    return PairedAlgebra(LieAlgebra(c, labels), T.form[np.ix_(perm, perm)])


def xi_matrix(r: Bivector) -> np.ndarray:
    n = r.dim
    top = np.concatenate([la.eye(n), r.r], axis=1)
    bottom = np.concatenate([la.zeros(n, n), la.eye(n)], axis=1)
    return np.concatenate([top, bottom], axis=0)


def xi_iso(L: LieAlgebra, r: Bivector) -> IsoReport:
    """Xi(x, a) = (x + r(a), a) from D(L) onto L x|_{ad*} L*."""
    D = build_double(L, r)
    return certify_map(xi_matrix(r), D.paired, semidirect_coadjoint(L))


# -- linked LSAs ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinkedData:
    """LSAs A, B with theta1[i] = theta1(a_i) in gl(B), theta2[j] = theta2(b_j) in gl(A)."""

    A: LSA
    B: LSA
    theta1: np.ndarray
    theta2: np.ndarray

    def t1(self, a) -> np.ndarray:
        return la.normalize(np.einsum("i,ijk->jk", np.asarray(a, dtype=object), self.theta1))

    def t2(self, b) -> np.ndarray:
        return la.normalize(np.einsum("i,ijk->jk", np.asarray(b, dtype=object), self.theta2))


@dataclass(frozen=True)
class LinkedReport:
    theta1_representation: bool
    theta2_representation: bool
    eq12: bool
    eq13: bool
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.theta1_representation and self.theta2_representation and self.eq12 and self.eq13

    def as_dict(self) -> dict:
        return {"ok": self.ok, "theta1_representation": self.theta1_representation,
                "theta2_representation": self.theta2_representation, "eq12": self.eq12,
                "eq13": self.eq13, "witness": {k: list(v) for k, v in self.witness.items()}}


def _is_representation(P: LSA, theta) -> tuple[int, int] | None:
    L = P.commutator()
    e = la.eye(P.dim)
    for i, j in itertools.combinations(range(P.dim), 2):
        lhs = theta(bracket(L, e[i], e[j]))
        ti, tj = theta(e[i]), theta(e[j])
        if not np.all(lhs == la.normalize(ti @ tj - tj @ ti)):
            return (i, j)
    return None


def linked_check(D: LinkedData) -> LinkedReport:
    A, B = D.A, D.B
    wit: dict = {}
    r1 = _is_representation(A, D.t1)
    r2 = _is_representation(B, D.t2)
    if r1:
        wit["theta1"] = r1
    if r2:
        wit["theta2"] = r2

    def first_failure(P, th_out, th_in):
        # (t(a) b) b' + b (t(a) b') - t(a)(b b') - t(t_in(b) a) b' over basis triples (a, b, b')
        # with t = th_out; entry [i, j, k, n] is the e_n coefficient
        defect = (np.einsum("imj,mkn->ijkn", th_out, P.a) + np.einsum("imk,jmn->ijkn", th_out, P.a)
                  - np.einsum("jkm,inm->ijkn", P.a, th_out) - np.einsum("jpi,pnk->ijkn", th_in, th_out))
        for idx in np.ndindex(*defect.shape[:3]):
            if not la.is_zero(defect[idx]):
                return idx
        return None

    w12 = first_failure(B, D.theta1, D.theta2)
    w13 = first_failure(A, D.theta2, D.theta1)
    if w12:
        wit["eq12"] = w12
    if w13:
        wit["eq13"] = w13
    return LinkedReport(r1 is None, r2 is None, w12 is None, w13 is None, wit)


def linked_product(D: LinkedData) -> LSA:
    """(a, b)(a', b') = (a a' + theta2(b) a', b b' + theta1(a) b') on A x B."""
    rep = linked_check(D)
    if not rep.ok:
        raise AlgebraError(f"A and B are not linked: {rep.as_dict()}")
    k, m = D.A.dim, D.B.dim
    a = la.zeros(k + m, k + m, k + m)
    a[:k, :k, :k] = D.A.a
    a[k:, k:, k:] = D.B.a
    for i in range(k):
        # a_i . b_j = theta1(a_i) b_j  in B
        a[i, k:, k:] = D.theta1[i].T
    for j in range(m):
        # b_j . a_i = theta2(b_j) a_i  in A
        a[k + j, :k, :k] = D.theta2[j].T
    P = LSA(a, D.A.labels + D.B.labels)
    if not lsa_check(P).ok or not np.all(P.commutator().c == linked_bracket(D).c):
        raise AssertionError("linked product failed certification")
    return P


def linked_bracket(D: LinkedData) -> LieAlgebra:
    """The bracket ([a,a'] + t2(b)a' - t2(b')a, [b,b'] + t1(a)b' - t1(a')b)."""
    k, m = D.A.dim, D.B.dim
    c = la.zeros(k + m, k + m, k + m)
    c[:k, :k, :k] = D.A.commutator().c
    c[k:, k:, k:] = D.B.commutator().c
    for i, j in itertools.product(range(k), range(m)):
        # [(a_i, 0), (0, b_j)] = (-theta2(b_j) a_i, theta1(a_i) b_j)
        v = np.concatenate([-D.theta2[j][:, i], D.theta1[i][:, j]])
        c[i, k + j] = v
        c[k + j, i] = -v
    return LieAlgebra(la.normalize(c))


@dataclass(frozen=True, eq=False)
class Splitting:
    data: LinkedData
    basis: np.ndarray  # columns: U rows then V rows, as vectors of P

    def reconstruct(self) -> LSA:
        """linked_product expressed back in the original basis."""
        return linked_product(self.data).change_basis(la.inverse(self.basis))


def split_ideals(P: LSA, U: np.ndarray, V: np.ndarray) -> Splitting:
    """Linked data of an LSA split into two supplementary left ideals U + V.

    A left ideal here is stable under left multiplication by the whole
    algebra; that is what makes theta1(a) b = a b land in V and
    theta2(b) a = b a land in U.
    """
    U = la.normalize(np.atleast_2d(np.asarray(U, dtype=object)))
    V = la.normalize(np.atleast_2d(np.asarray(V, dtype=object)))
    n = P.dim
    k, m = U.shape[0], V.shape[0]
    T = np.concatenate([U, V], axis=0).T
    if k + m != n or la.rank(T) != n:
        raise AlgebraError("subspaces are not supplementary")
    for name, S in (("U", U), ("V", V)):
        if not all(la.in_span(P.mul(x, s), la.span(S, n)) for x in la.eye(n) for s in S):
            raise AlgebraError(f"{name} is not a left ideal")
    Tinv = la.inverse(T)

    def coords(v):
        return la.normalize(Tinv @ v)

    a_A, a_B = la.zeros(k, k, k), la.zeros(m, m, m)
    th1, th2 = la.zeros(k, m, m), la.zeros(m, k, k)
    for i, j in itertools.product(range(k), repeat=2):
        a_A[i, j] = coords(P.mul(U[i], U[j]))[:k]
    for i, j in itertools.product(range(m), repeat=2):
        a_B[i, j] = coords(P.mul(V[i], V[j]))[k:]
    for i, j in itertools.product(range(k), range(m)):
        th1[i][:, j] = coords(P.mul(U[i], V[j]))[k:]
        th2[j][:, i] = coords(P.mul(V[j], U[i]))[:k]
    return Splitting(LinkedData(LSA(a_A), LSA(a_B), th1, th2), T)


def coadjoint_linked_data(L: LieAlgebra, r: Bivector) -> LinkedData:
    """A = L with its symplectic LSA, B = L* with the dual LSA, thetas the coadjoint actions."""
    w = omega_from_r(r)
    A = symplectic_lsa(L, w)
    B = dual_lsa(L, r)
    dual = dual_bracket(L, r)
    n = L.dim
    th1 = np.array([L.coad(L.basis_vector(i)) for i in range(n)], dtype=object)
    th2 = np.array([dual.coad(dual.basis_vector(i)) for i in range(n)], dtype=object)
    return LinkedData(A, B, th1, th2)


def _require_invertible_cybe(L: LieAlgebra, r: Bivector) -> None:
    if not r.invertible:
        raise AlgebraError("r must be invertible")
    if not schouten_rr(L, r).cybe_ok:
        raise AlgebraError("r does not solve the CYBE")


def double_lsa(L: LieAlgebra, r: Bivector) -> LSA:
    """(x, a)(y, b) = (x y + ad*_a y, a b + ad*_x b) on D(L)."""
    _require_invertible_cybe(L, r)
    w = omega_from_r(r)
    A = symplectic_lsa(L, w)
    B = dual_lsa(L, r)
    dual = dual_bracket(L, r)
    n = L.dim
    out = la.zeros(2 * n, 2 * n, 2 * n)
    e = la.eye(n)
    zero = la.zeros(n)
    for i, j in itertools.product(range(n), repeat=2):
        out[i, j] = np.concatenate([A.mul(e[i], e[j]), zero])
        out[i, n + j] = np.concatenate([zero, L.coad(e[i]) @ e[j]])
        out[n + i, j] = np.concatenate([dual.coad(e[i]) @ e[j], zero])
        out[n + i, n + j] = np.concatenate([zero, B.mul(e[i], e[j])])
    return LSA(la.normalize(out), L.labels + B.labels)


def cotangent_lsa(L: LieAlgebra, w: SymplecticForm) -> LSA:
    """(x, a)(y, b) = (x y, ad*_x b) on L x|_{ad*} L*."""
    A = symplectic_lsa(L, w)
    n = L.dim
    out = la.zeros(2 * n, 2 * n, 2 * n)
    e = la.eye(n)
    zero = la.zeros(n)
    for i, j in itertools.product(range(n), repeat=2):
        out[i, j] = np.concatenate([A.mul(e[i], e[j]), zero])
        out[i, n + j] = np.concatenate([zero, L.coad(e[i]) @ e[j]])
    return LSA(la.normalize(out), L.labels + tuple(f"{s}*" for s in L.labels))


def cotangent_lsa_report(L: LieAlgebra, w: SymplecticForm) -> dict:
    P = cotangent_lsa(L, w)
    A = symplectic_lsa(L, w)
    r = r_from_omega(L, w)
    n = L.dim
    e = la.eye(2 * n)
    proj_ok = all(
        np.all(P.mul(e[i], e[j])[:n] == A.mul(e[i][:n], e[j][:n]))
        for i, j in itertools.product(range(2 * n), repeat=2)
    )
    xi = xi_matrix(r)
    transported = double_lsa(L, r).change_basis(la.inverse(xi))
    return {
        "lsa_ok": lsa_check(P).ok,
        "compatible": compatible(P, semidirect_coadjoint(L).alg),
        "projection_is_morphism": bool(proj_ok),
        "xi_transport_projection_agrees": bool(np.all(transported.a[:, :, :n] == P.a[:, :, :n])),
        "xi_transport_equal": transported.equals(P),
    }


@dataclass(frozen=True)
class DoubleCompletenessReport:
    traces_g: list
    traces_dual: list
    sym_traces_g: list
    sym_traces_image: list
    unimodular: bool
    solvable: bool

    @property
    def complete(self) -> bool:
        return all(t == 0 for t in self.traces_g + self.traces_dual)

    @property
    def consistent(self) -> bool:
        return (self.traces_g == self.sym_traces_g and self.traces_dual == self.sym_traces_image
                and self.complete == self.unimodular)

    def as_dict(self) -> dict:
        f = lambda ts: [la.fmt(t) for t in ts]  # noqa: E731
        return {"complete": self.complete, "consistent": self.consistent,
                "unimodular": self.unimodular, "solvable": self.solvable,
                "traces_g": f(self.traces_g), "traces_dual": f(self.traces_dual),
                "symplectic_traces_g": f(self.sym_traces_g),
                "symplectic_traces_image": f(self.sym_traces_image)}


def double_completeness(L: LieAlgebra, r: Bivector) -> DoubleCompletenessReport:
    P = double_lsa(L, r)
    A = symplectic_lsa(L, omega_from_r(r))
    n = L.dim
    traces = P.right_traces()
    e = la.eye(n)
    return DoubleCompletenessReport(
        traces_g=traces[:n],
        traces_dual=traces[n:],
        sym_traces_g=[la.trace(A.right(e[i])) for i in range(n)],
        sym_traces_image=[la.trace(A.right(r.sharp(e[i]))) for i in range(n)],
        unimodular=unimodular(L),
        solvable=solvable(L),
    )


@dataclass(frozen=True)
class ComplexReport:
    J: np.ndarray
    square_is_minus_identity: bool
    nijenhuis_zero: bool
    witness: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.square_is_minus_identity and self.nijenhuis_zero

    def as_dict(self) -> dict:
        return {"ok": self.ok, "J_squared_minus_identity": self.square_is_minus_identity,
                "nijenhuis_zero": self.nijenhuis_zero,
                "witness": list(self.witness) if self.witness else None,
                "J": [[la.fmt(v) for v in row] for row in self.J]}


def complex_structure(L: LieAlgebra, w: SymplecticForm) -> ComplexReport:
    """J(x, a) = (-q^{-1}(a), q(x)) on D(L), with its Nijenhuis tensor."""
    r = r_from_omega(L, w)
    q = q_map(w)
    n = L.dim
    J = np.concatenate([
        np.concatenate([la.zeros(n, n), la.normalize(-r.r)], axis=1),
        np.concatenate([q, la.zeros(n, n)], axis=1),
    ], axis=0)
    sq = bool(np.all(la.normalize(J @ J) == la.normalize(-la.eye(2 * n))))
    D = build_double(L, r).alg
    e = la.eye(2 * n)
    witness = None
    for i, j in itertools.combinations(range(2 * n), 2):
        v1, v2 = e[i], e[j]
        Jv1, Jv2 = J @ v1, J @ v2
        N = (bracket(D, Jv1, Jv2) - bracket(D, v1, v2)
             - J @ bracket(D, v1, Jv2) - J @ bracket(D, Jv1, v2))
        if not la.is_zero(N):
            witness = (i, j)
            break
    return ComplexReport(J, sq, witness is None, witness)
