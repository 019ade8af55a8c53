"""The polynomial Poisson tensor on L* attached to a symplectic Lie algebra.

Exact rationals are used wherever the coadjoint exponential series
terminates; otherwise values are floats with an explicit truncation bound.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from . import linalg as la
from .lie_core import LieAlgebra, bracket
from .rmatrix import SymplecticForm, check_symplectic, q_map, r_from_omega

RESIDUAL_TOL = 1e-9
RANK_THRESHOLD = 1e-8
DEFAULT_K = 25


def cocycle_check(L: LieAlgebra, q: np.ndarray) -> tuple[int, int] | None:
    """First basis pair violating q([x,y]) = ad*_x q(y) - ad*_y q(x); None if q is a cocycle."""
    e = L.basis_vector
    for i, j in itertools.combinations(range(L.dim), 2):
        lhs = q @ bracket(L, e(i), e(j))
        rhs = L.coad(e(i)) @ q @ e(j) - L.coad(e(j)) @ q @ e(i)
        if not la.is_zero(la.normalize(lhs - rhs)):
            return (i, j)
    return None


def nilpotency_index(A: np.ndarray) -> int | None:
    """Smallest m with A^m = 0, or None if A is not nilpotent (exact matrices)."""
    n = A.shape[0]
    power = la.eye(n)
    for m in range(1, n + 1):
        power = la.normalize(power @ A)
        if la.is_zero(power):
            return m
    return None


def _is_exact(v) -> bool:
    return np.asarray(v).dtype == object


@dataclass(frozen=True)
class ExpPoint:
    a: np.ndarray
    K: int
    value: np.ndarray
    exact: bool
    terms: int
    tail_bound: float = 0.0

    def as_dict(self) -> dict:
        val = [la.fmt(v) for v in self.value] if self.exact else [float(v) for v in self.value]
        return {"a": [la.fmt(v) for v in self.a], "K": self.K, "exact": self.exact,
                "terms": self.terms, "tail_bound": self.tail_bound, "value": val}


def exp_series_bound(norm: float, K: int) -> float:
    """Bound on sum_{k>K} norm^(k-1)/k!, namely norm^K/(K+1)! * e^norm."""
    return norm ** K / math.factorial(K + 1) * math.exp(norm)


def q_exp(L: LieAlgebra, q: np.ndarray, a, K: int = DEFAULT_K) -> ExpPoint:
    """Q(exp a) = sum_{k>=1} (ad*_a)^(k-1)/k! q(a)."""
    if K < 1:
        raise ValueError("truncation order K must be >= 1")
    a = la.normalize(np.asarray(a, dtype=object))
    A = L.coad(a)
    qa = la.normalize(q @ a)
    m = nilpotency_index(A)
    if m is not None and m <= K:
        total, term = la.zeros(L.dim), qa
        for k in range(1, m + 1):
            total = total + term / math.factorial(k)
            term = la.normalize(A @ term)
        return ExpPoint(a, K, la.normalize(total), True, m)
    Af = la.to_float(A)
    term = la.to_float(qa)
    total = np.zeros(L.dim)
    for k in range(1, K + 1):
        total += term / math.factorial(k)
        term = Af @ term
    bound = exp_series_bound(float(np.linalg.norm(Af, 2)), K) * float(np.linalg.norm(la.to_float(qa)))
    return ExpPoint(a, K, total, False, K, bound)


def exp_ad(L: LieAlgebra, a) -> tuple[np.ndarray, bool]:
    """Ad_{exp a} = exp(ad_a): exact if ad_a is nilpotent, else scipy's expm.

    Deliberately independent of the truncated Q series, so that the
    cohomology residual measures the truncation error of Q alone.
    """
    A = L.ad(la.normalize(np.asarray(a, dtype=object)))
    m = nilpotency_index(A)
    if m is not None:
        total, power = la.zeros(L.dim, L.dim), la.eye(L.dim)
        for k in range(m):
            total = total + power / math.factorial(k)
            power = la.normalize(power @ A)
        return la.normalize(total), True
    return expm(la.to_float(A)), False


def delta(L: LieAlgebra, alpha) -> np.ndarray:
    """Matrix of x -> ad*_x alpha."""
    alpha = np.asarray(alpha)
    if _is_exact(alpha):
        # column i is ad*_{e_i} alpha
        return la.normalize(np.einsum("ijk,k->ji", -L.c, alpha))
    return np.einsum("ijk,k->ji", -la.to_float(L.c), alpha.astype(float))


def invariant_covectors(L: LieAlgebra) -> np.ndarray:
    """Basis of {alpha : ad*_x alpha = 0 for all x}."""
    return la.nullspace(np.concatenate([L.coad(L.basis_vector(i)) for i in range(L.dim)], axis=0))


@dataclass(frozen=True, eq=False)
class PolyPoisson:
    """Lambda^{ij}(xi) = constant[i,j] + linear[i,j,k] xi_k + quadratic[i,j,k,l] xi_k xi_l.

    The quadratic tensor is symmetric in (k, l) and summed over all k, l.
    """

    constant: np.ndarray
    linear: np.ndarray
    quadratic: np.ndarray

    @property
    def dim(self) -> int:
        return self.constant.shape[0]

    def evaluate(self, xi) -> np.ndarray:
        xi = np.asarray(xi)
        if _is_exact(xi):
            return la.normalize(self.constant + np.einsum("ijk,k->ij", self.linear, xi)
                                + np.einsum("ijkl,k,l->ij", self.quadratic, xi, xi))
        f = la.to_float
        return f(self.constant) + np.einsum("ijk,k->ij", f(self.linear), xi) + np.einsum(
            "ijkl,k,l->ij", f(self.quadratic), xi, xi)

    def bracket(self, x, y, xi):
        return np.asarray(x) @ self.evaluate(xi) @ np.asarray(y)

    def antisymmetric(self) -> bool:
        return all(bool(np.all(t == -np.swapaxes(t, 0, 1)))
                   for t in (self.constant, self.linear, self.quadratic))

    def degree(self) -> int:
        for d, t in ((2, self.quadratic), (1, self.linear), (0, self.constant)):
            if not la.is_zero(t):
                return d
        return -1

    def as_dict(self) -> dict:
        def enc(t):
            return np.vectorize(la.fmt, otypes=[object])(t).tolist() if t.size else []
        return {"dim": self.dim, "constant": enc(self.constant), "linear": enc(self.linear),
                "quadratic": enc(self.quadratic)}

    @classmethod
    def lie_poisson(cls, L: LieAlgebra) -> "PolyPoisson":
        """The linear structure {e_i, e_j}(xi) = <xi, [e_i, e_j]>."""
        n = L.dim
        return cls(la.zeros(n, n), L.c, la.zeros(n, n, n, n))


def poly_tensor(L: LieAlgebra, w: SymplecticForm) -> PolyPoisson:
    """{x, y}(xi) = -<xi, [x, y]> - r(ad*_x xi, ad*_y xi) as coefficient tensors."""
    r = r_from_omega(L, w)
    n = L.dim
    M = [L.coad(L.basis_vector(i)) for i in range(n)]
    quad = la.zeros(n, n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        # r(alpha, beta) = beta^T r alpha with alpha = M_i xi, beta = M_j xi
        form = la.normalize(-(M[j].T @ r.r @ M[i]))
        quad[i, j] = la.normalize((form + form.T) / 2)
    return PolyPoisson(la.zeros(n, n), la.normalize(-L.c), quad)


def lambda_sharp(L: LieAlgebra, w: SymplecticForm, xi) -> np.ndarray:
    """delta(xi) o r o (q + delta(xi)) as a matrix L -> L*."""
    r = r_from_omega(L, w).r
    q = q_map(w)
    d = delta(L, xi)
    if _is_exact(d):
        return la.normalize(d @ r @ (q + d))
    return d @ la.to_float(r) @ (la.to_float(q) + d)


def sharp_consistent(L: LieAlgebra, w: SymplecticForm, xi, tol: float = RESIDUAL_TOL,
                     tensor: PolyPoisson | None = None) -> bool:
    """<lambda_sharp(xi) x, y> == {x, y}_Lambda(xi) for all basis x, y."""
    S = lambda_sharp(L, w, xi)
    B = (tensor or poly_tensor(L, w)).evaluate(xi)
    if _is_exact(S) and _is_exact(B):
        return bool(np.all(S.T == B))
    return float(np.max(np.abs(la.to_float(S).T - la.to_float(B)), initial=0.0)) <= tol


@dataclass(frozen=True)
class TrivectorPoly:
    """Coefficients of [Lambda, Lambda]^{ijk}(xi), one symmetric tensor per degree."""

    coefficients: dict  # degree -> array [i, j, k, m_1 .. m_d]

    @property
    def jacobi_ok(self) -> bool:
        return all(la.is_zero(t) for t in self.coefficients.values())

    def nonzero(self) -> list:
        out = []
        n = next(iter(self.coefficients.values())).shape[0]
        for d, t in sorted(self.coefficients.items()):
            for idx in itertools.product(range(n), repeat=3 + d):
                i, j, k = idx[:3]
                mono = idx[3:]
                if i < j < k and list(mono) == sorted(mono) and t[idx] != 0:
                    out.append({"ijk": [i, j, k], "monomial": list(mono), "coeff": la.fmt(t[idx])})
        return out

    def as_dict(self) -> dict:
        return {"jacobi_ok": self.jacobi_ok, "nonzero": self.nonzero()}


def _symmetrize_tail(t: np.ndarray, d: int) -> np.ndarray:
    if d < 2:
        return t
    axes = list(range(3, 3 + d))
    total = la.zeros(*t.shape)
    perms = list(itertools.permutations(axes))
    for p in perms:
        total = total + np.transpose(t, [0, 1, 2] + list(p))
    return la.normalize(total / len(perms))


def schouten_poly(P: PolyPoisson) -> TrivectorPoly:
    """[Lambda, Lambda]^{ijk} = sum_l Lambda^{il} d_l Lambda^{jk} + cyclic, exactly."""
    C, D, S = P.constant, P.linear, P.quadratic
    # d_l Lambda^{jk} = D[j,k,l] + 2 S[j,k,l,c] xi_c
    S2 = 2 * S
    terms = {
        0: np.einsum("il,jkl->ijk", C, D),
        1: np.einsum("il,jklc->ijkc", C, S2) + np.einsum("ila,jkl->ijka", D, D),
        2: np.einsum("ila,jklc->ijkac", D, S2) + np.einsum("ilab,jkl->ijkab", S, D),
        3: np.einsum("ilab,jklc->ijkabc", S, S2),
    }
    coeffs = {}
    for d, t in terms.items():
        t = la.normalize(t)
        cyc = t + np.transpose(t, [1, 2, 0] + list(range(3, 3 + d))) + np.transpose(t, [2, 0, 1] + list(range(3, 3 + d)))
        coeffs[d] = _symmetrize_tail(la.normalize(cyc), d)
    return TrivectorPoly(coeffs)


@dataclass(frozen=True)
class CohomologyReport:
    a: np.ndarray
    K: int
    exact: bool
    residual: float
    tol: float
    tail_bound: float

    @property
    def ok(self) -> bool:
        return self.residual == 0 if self.exact else self.residual < self.tol

    def as_dict(self) -> dict:
        return {"ok": self.ok, "a": [la.fmt(v) for v in self.a], "K": self.K, "exact": self.exact,
                "residual": self.residual, "tol": self.tol, "tail_bound": self.tail_bound}


def cohomology_check(L: LieAlgebra, w: SymplecticForm, a, K: int = DEFAULT_K,
                     tol: float = RESIDUAL_TOL) -> CohomologyReport:
    """q - q^sigma == -delta(Q(sigma^-1)) at sigma = exp(a), q^sigma = Ad*_{sigma^-1} q Ad_sigma."""
    check_symplectic(L, w)
    q = q_map(w)
    a = la.normalize(np.asarray(a, dtype=object))
    Ad, ad_exact = exp_ad(L, a)
    Qinv = q_exp(L, q, la.normalize(-a), K)
    if ad_exact and Qinv.exact:
        lhs = la.normalize(q - Ad.T @ q @ Ad)
        rhs = la.normalize(-delta(L, Qinv.value))
        residual = float(max((abs(v) for v in la.normalize(lhs - rhs).flat), default=0))
        return CohomologyReport(a, K, True, residual, tol, 0.0)
    Adf, qf = la.to_float(Ad), la.to_float(q)
    lhs = qf - Adf.T @ qf @ Adf
    rhs = -delta(L, la.to_float(Qinv.value))
    residual = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return CohomologyReport(a, K, False, residual, tol, Qinv.tail_bound)


@dataclass(frozen=True)
class LeafRank:
    point: ExpPoint
    rank_lambda: int
    rank_coadjoint: int
    indeterminate: bool = False

    @property
    def equal(self) -> bool:
        return self.rank_lambda == self.rank_coadjoint

    def as_dict(self) -> dict:
        return {"point": self.point.as_dict(), "rank_lambda": self.rank_lambda,
                "rank_coadjoint": self.rank_coadjoint, "equal": self.equal,
                "indeterminate": self.indeterminate}


def _numeric_rank(m: np.ndarray, threshold: float) -> tuple[int, bool]:
    """Rank by singular values relative to max(1, s_max); flags values within
    two decades of the threshold as indeterminate."""
    s = np.linalg.svd(m, compute_uv=False)
    scale = max(1.0, float(s[0]) if s.size else 1.0)
    cut = threshold * scale
    rank = int(np.sum(s > cut))
    unclear = bool(np.any((s > cut / 100) & (s < cut * 100)))
    return rank, unclear


def leaf_rank(L: LieAlgebra, w: SymplecticForm, a, K: int = DEFAULT_K,
              threshold: float = RANK_THRESHOLD) -> LeafRank:
    """Rank of Lambda^sharp at Q(exp a) against the rank of the coadjoint orbit map there."""
    check_symplectic(L, w)
    pt = q_exp(L, q_map(w), a, K)
    lam = lambda_sharp(L, w, pt.value)
    orbit = delta(L, pt.value)
    if pt.exact:
        return LeafRank(pt, la.rank(lam), la.rank(orbit))
    r1, u1 = _numeric_rank(lam, threshold)
    r2, u2 = _numeric_rank(orbit, threshold)
    return LeafRank(pt, r1, r2, u1 or u2)


def sample_points(dim: int, count: int, seed: int, lo: int = -2, hi: int = 2) -> list[np.ndarray]:
    """Reproducible integer Lie algebra elements a; image points are Q(exp a)."""
    rng = random.Random(seed)
    return [la.qarray([rng.randint(lo, hi) for _ in range(dim)]) for _ in range(count)]
