"""Left-symmetric algebras and completeness of left invariant affine structures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .lie_core import (
    AlgebraError,
    JacobiReport,
    LieAlgebra,
    bracket,
    jacobi_check,
    quotient,
    solvable,
    subalgebra,
    unimodular,
)
from .rmatrix import (
    Bivector,
    SymplecticForm,
    check_symplectic,
    dual_bracket,
    omega_closed_witness,
    q_map,
    r_from_omega,
    schouten_rr,
)


@dataclass(frozen=True, eq=False)
class LSA:
    """Product e_i . e_j = sum_k a[i, j, k] e_k."""

    a: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        a = la.normalize(np.asarray(self.a, dtype=object))
        if a.ndim != 3 or len(set(a.shape)) != 1:
            raise AlgebraError(f"product tensor must be n x n x n, got {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(a.shape[0]))
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def mul(self, x, y) -> np.ndarray:
        return la.normalize(np.einsum("i,j,ijk->k", np.asarray(x, dtype=object), np.asarray(y, dtype=object), self.a))

    def left(self, x) -> np.ndarray:
        """Matrix of y -> x y."""
        return la.normalize(np.einsum("i,ijk->kj", np.asarray(x, dtype=object), self.a))

    def right(self, y) -> np.ndarray:
        """Matrix of x -> x y."""
        return la.normalize(np.einsum("j,ijk->ki", np.asarray(y, dtype=object), self.a))

    def commutator(self) -> LieAlgebra:
        return LieAlgebra(la.normalize(self.a - np.transpose(self.a, (1, 0, 2))), self.labels)

    def right_traces(self) -> list[Fraction]:
        return [la.trace(self.right(e)) for e in la.eye(self.dim)]

    def change_basis(self, P: np.ndarray) -> "LSA":
        """Product in the basis f_a = sum_i P[i, a] e_i."""
        return LSA(la.transform3(self.a, la.normalize(np.asarray(P, dtype=object))))

    def equals(self, other: "LSA") -> bool:
        return self.a.shape == other.a.shape and bool(np.all(self.a == other.a))


@dataclass(frozen=True)
class LSAReport:
    ok: bool
    witness: tuple[int, int, int] | None
    bracket: LieAlgebra
    jacobi: JacobiReport

    def as_dict(self) -> dict:
        return {"ok": self.ok, "witness": list(self.witness) if self.witness else None,
                "commutator_jacobi": self.jacobi.as_dict()}


def associator(P: LSA) -> np.ndarray:
    """A[i, j, k, m]: coefficient of e_m in (e_i e_j) e_k - e_i (e_j e_k)."""
    a = P.a
    return la.normalize(np.einsum("ijl,lkm->ijkm", a, a) - np.einsum("jkl,ilm->ijkm", a, a))


def lsa_check(P: LSA) -> LSAReport:
    A = associator(P)
    sym = A - np.transpose(A, (1, 0, 2, 3))
    witness = None
    for i, j, k in itertools.product(range(P.dim), repeat=3):
        if i < j and not la.is_zero(sym[i, j, k]):
            witness = (i, j, k)
            break
    L = P.commutator()
    return LSAReport(witness is None, witness, L, jacobi_check(L))


def compatible(P: LSA, L: LieAlgebra) -> bool:
    """x y - y x == [x, y] on all basis pairs."""
    return P.dim == L.dim and bool(np.all(P.commutator().c == L.c))


def symplectic_lsa(L: LieAlgebra, w: SymplecticForm) -> LSA:
    """omega(x y, z) = -omega(y, [x, z]), i.e. x y = r(ad*_x q(y))."""
    check_symplectic(L, w)
    q = q_map(w)
    r = la.inverse(q)
    n = L.dim
    a = la.zeros(n, n, n)
    for i in range(n):
        left = la.normalize(r @ L.coad(L.basis_vector(i)) @ q)
        a[i] = left.T
    return LSA(a, L.labels)


def dual_lsa(L: LieAlgebra, r: Bivector) -> LSA:
    """alpha beta = ad*_{r(alpha)} beta on L*."""
    n = L.dim
    a = la.zeros(n, n, n)
    for i in range(n):
        a[i] = L.coad(r.sharp(L.basis_vector(i))).T
    return LSA(a, tuple(f"{s}*" for s in L.labels))


def eta_check(L: LieAlgebra, r: Bivector) -> tuple[int, int] | None:
    """First basis pair where alpha -> (alpha, ad*_{r(alpha)}) fails to be a
    homomorphism into aff(L*), or None."""
    dual = dual_bracket(L, r)
    n = L.dim
    e = L.basis_vector
    lefts = [L.coad(r.sharp(e(i))) for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        ab = bracket(dual, e(i), e(j))
        translation = la.normalize(lefts[i] @ e(j) - lefts[j] @ e(i))
        linear = la.normalize(lefts[i] @ lefts[j] - lefts[j] @ lefts[i])
        if not (np.all(translation == ab) and np.all(L.coad(r.sharp(ab)) == linear)):
            return (i, j)
    return None


@dataclass(frozen=True, eq=False)
class ImageLSA:
    basis: np.ndarray  # rows, RREF basis of Im(r) in L
    preimages: np.ndarray  # rows alpha_a with r(alpha_a) = basis[a]
    algebra: LieAlgebra
    lsa: LSA
    omega_bar: np.ndarray
    checks: dict

    def coords(self, x) -> np.ndarray:
        _, pivots = la.rref(self.basis)
        return la.qarray([x[p] for p in pivots]) if pivots else la.zeros(0)

    def as_dict(self) -> dict:
        return {"dim": self.algebra.dim, "basis": [[la.fmt(v) for v in row] for row in self.basis],
                "omega_bar": [[la.fmt(v) for v in row] for row in self.omega_bar], **self.checks}


def _solve_preimage(r: Bivector, x) -> np.ndarray:
    n = r.dim
    aug = np.concatenate([r.r, np.asarray(x, dtype=object).reshape(n, 1)], axis=1)
    red, pivots = la.rref(aug)
    if n in pivots:
        raise AlgebraError("vector is not in the image of r")
    sol = la.zeros(n)
    for row, p in zip(red, pivots):
        sol[p] = row[n]
    return sol


def image_lsa(L: LieAlgebra, r: Bivector) -> ImageLSA:
    """Im(r) with omega_bar(r(a), r(b)) = <a, r(b)> and r(a) r(b) = r(ad*_{r(a)} b)."""
    if not r.skew:
        raise AlgebraError("bivector is not skew-symmetric")
    n = L.dim
    basis = r.image()
    m = basis.shape[0]
    checks: dict = {}
    checks["subalgebra"] = all(la.in_span(bracket(L, x, y), basis) for x in basis for y in basis)
    if not checks["subalgebra"]:
        raise AlgebraError("Im(r) is not a subalgebra")
    pre = np.array([_solve_preimage(r, x) for x in basis], dtype=object).reshape(m, n)
    kernel = r.kernel()
    # omega_bar well-defined iff ker(r) pairs trivially with Im(r)
    checks["omega_bar_well_defined"] = la.is_zero(kernel @ basis.T) if kernel.shape[0] and m else True
    if not checks["omega_bar_well_defined"]:
        raise AlgebraError("omega_bar depends on the choice of preimage")
    wbar = la.normalize(pre @ basis.T) if m else la.zeros(0, 0)
    alg = subalgebra(L, basis) if m else LieAlgebra(la.zeros(0, 0, 0))
    _, pivots = la.rref(basis) if m else (None, [])

    def coords(x):
        return [x[p] for p in pivots]

    a = la.zeros(m, m, m)
    for i, j in itertools.product(range(m), repeat=2):
        a[i, j] = coords(r.sharp(L.coad(basis[i]) @ pre[j]))
    P = LSA(a)
    checks["omega_bar_skew"] = bool(np.all(wbar == -wbar.T))
    checks["omega_bar_nondegenerate"] = la.rank(wbar) == m if m else True
    if m and checks["omega_bar_skew"]:
        checks["omega_bar_closed"] = omega_closed_witness(alg, SymplecticForm(wbar)) is None
    else:
        checks["omega_bar_closed"] = True
    # product independent of the second preimage: r(ad*_x kappa) = 0 for kappa in ker(r)
    checks["product_well_defined"] = all(
        la.is_zero(r.sharp(L.coad(x) @ k)) for x in basis for k in kernel
    )
    # p: L* -> Im(r) is an LSA morphism, p(alpha beta) = p(alpha) p(beta)
    D = dual_lsa(L, r)
    e = L.basis_vector
    morph = True
    for i, j in itertools.product(range(n), repeat=2):
        lhs = coords(r.sharp(D.mul(e(i), e(j))))
        rhs = P.mul(coords(r.sharp(e(i))), coords(r.sharp(e(j)))) if m else []
        if list(lhs) != list(rhs):
            morph = False
            break
    checks["projection_is_lsa_morphism"] = morph
    checks["lsa_ok"] = lsa_check(P).ok
    checks["compatible"] = compatible(P, alg)
    return ImageLSA(basis, pre, alg, P, wbar, checks)


@dataclass(frozen=True)
class CompletenessReport:
    cybe_ok: bool
    traces: list
    complete: bool | None = None
    image_traces: list | None = None
    traces_match: bool | None = None
    ker_r: np.ndarray | None = None
    image_algebra: LieAlgebra | None = None
    image_unimodular: bool | None = None
    quotient_solvable: bool | None = None
    kernel_abelian_ideal: bool | None = None
    trace_factorizes: bool | None = None
    unimodular_not_solvable: bool | None = None

    @property
    def consistent(self) -> bool:
        """The three routes to completeness agree."""
        return bool(self.traces_match) and self.complete == self.image_unimodular

    def as_dict(self) -> dict:
        out = {"cybe_ok": self.cybe_ok, "traces": [la.fmt(t) for t in self.traces]}
        if not self.cybe_ok:
            out["claims_void"] = True
            return out
        out.update({
            "complete": self.complete,
            "image_traces": [la.fmt(t) for t in self.image_traces],
            "traces_match": self.traces_match,
            "image_dim": self.image_algebra.dim,
            "image_unimodular": self.image_unimodular,
            "quotient_solvable": self.quotient_solvable,
            "kernel_abelian_ideal": self.kernel_abelian_ideal,
            "trace_factorizes": self.trace_factorizes,
            "unimodular_not_solvable": self.unimodular_not_solvable,
            "ker_r": [[la.fmt(v) for v in row] for row in self.ker_r],
            "consistent": self.consistent,
        })
        return out


def completeness(L: LieAlgebra, r: Bivector) -> CompletenessReport:
    """Geodesic completeness of the affine structure alpha beta = ad*_{r(alpha)} beta."""
    n = L.dim
    D = dual_lsa(L, r)
    traces = D.right_traces()
    cybe = schouten_rr(L, r).cybe_ok
    if not cybe:
        return CompletenessReport(False, traces)
    img = image_lsa(L, r)
    e = L.basis_vector
    image_traces = []
    for i in range(n):
        y = img.coords(r.sharp(e(i)))
        image_traces.append(la.trace(img.lsa.right(y)) if img.algebra.dim else Fraction(0))
    kernel = r.kernel()
    ker_ideal = True
    for k in kernel:
        for i in range(n):
            if not (la.in_span(D.mul(e(i), k), kernel) and la.is_zero(D.mul(k, e(i)))):
                ker_ideal = False
        for k2 in kernel:
            if not la.is_zero(D.mul(k, k2)):
                ker_ideal = False
    factorizes = all(la.trace(D.right(k)) == 0 for k in kernel)
    dual = dual_bracket(L, r)
    if kernel.shape[0] == n:
        quot_solvable = True
    else:
        quot_solvable = solvable(quotient(dual, kernel))
    img_uni = unimodular(img.algebra)
    return CompletenessReport(
        cybe_ok=True,
        traces=traces,
        complete=all(t == 0 for t in traces),
        image_traces=image_traces,
        traces_match=traces == image_traces,
        ker_r=kernel,
        image_algebra=img.algebra,
        image_unimodular=img_uni,
        quotient_solvable=quot_solvable,
        kernel_abelian_ideal=ker_ideal,
        trace_factorizes=factorizes,
        unimodular_not_solvable=img_uni and not quot_solvable,
    )


@dataclass(frozen=True)
class TransportReport:
    identities: dict
    witnesses: dict = field(default_factory=dict)

    # the product of symplectic_lsa needs no global sign flip to be compatible
    sign_flip_applied: bool = False

    @property
    def ok(self) -> bool:
        return all(self.identities.values())

    def as_dict(self) -> dict:
        return {"ok": self.ok, **self.identities, "sign_flip_applied": self.sign_flip_applied,
                "witnesses": {k: list(v) for k, v in self.witnesses.items()}}


def transport_check(L: LieAlgebra, w: SymplecticForm) -> TransportReport:
    """Certify the identities relating L, L* and the transport map q."""
    r = r_from_omega(L, w)
    q = q_map(w)
    R = r.r
    P = symplectic_lsa(L, w)
    Dl = dual_lsa(L, r)
    dual = dual_bracket(L, r)
    n = L.dim
    e = L.basis_vector
    ids: dict = {}
    wit: dict = {}

    def record(name, pairs):
        for idx, ok in pairs:
            if not ok:
                ids[name] = False
                wit[name] = idx
                return
        ids[name] = True

    def eq(x, y):
        return bool(np.all(la.normalize(x) == la.normalize(y)))

    record("a", (((i,), eq(q @ P.left(e(i)), L.coad(e(i)) @ q)) for i in range(n)))
    record("a_prime", (((i,), eq(R @ L.coad(e(i)), P.left(e(i)) @ R)) for i in range(n)))
    record("b", (((i,), eq(R @ L.coad(e(i)), dual.coad(q @ e(i)) @ R)) for i in range(n)))
    pairs = list(itertools.product(range(n), repeat=2))
    record("c", (((i, j), eq(q @ bracket(L, R @ e(i), R @ e(j)),
                             L.coad(R @ e(i)) @ e(j) - L.coad(R @ e(j)) @ e(i))) for i, j in pairs))
    record("d", (((i, j), eq(Dl.mul(q @ e(i), e(j)), L.coad(e(i)) @ e(j))) for i, j in pairs))
    record("e", (((i, j), eq(P.mul(R @ e(j), e(i)), dual.coad(e(j)) @ e(i))) for i, j in pairs))
    record("eq10_matches_dual_lsa", (((i, j), eq(q @ P.mul(R @ e(i), R @ e(j)), Dl.mul(e(i), e(j)))) for i, j in pairs))
    ids["symplectic_lsa_compatible"] = compatible(P, L) and lsa_check(P).ok
    return TransportReport(ids, wit)
