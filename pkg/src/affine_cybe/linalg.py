"""Exact linear algebra over the rationals.

Matrices are numpy object arrays holding ``fractions.Fraction`` entries.
Only what the rest of the package needs: row reduction, kernels, ranks,
inverses and a couple of constructors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        raise TypeError(f"refusing to convert float {x!r} to an exact scalar")
    return Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x)


def qarray(data, shape: Sequence[int] | None = None) -> np.ndarray:
    """Build an object array of Fractions from nested lists/ints/strings."""
    arr = np.array(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = frac(v)
    return out


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def normalize(arr: np.ndarray) -> np.ndarray:
    """Coerce every entry back to Fraction (einsum may leave plain ints)."""
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = frac(v)
    return out


def is_zero(arr) -> bool:
    return all(v == 0 for v in np.asarray(arr, dtype=object).flat)


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns. Zero rows are dropped."""
    a = normalize(np.atleast_2d(np.asarray(m, dtype=object)))
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return normalize(a[:r]), pivots


def rank(m: np.ndarray) -> int:
    if np.asarray(m).size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m: np.ndarray) -> np.ndarray:
    """Basis of {v : m v = 0}, returned as rows in reduced echelon form."""
    m = np.atleast_2d(np.asarray(m, dtype=object))
    cols = m.shape[1]
    red, pivots = rref(m) if m.shape[0] else (zeros(0, cols), [])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(cols)
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    if not basis:
        return zeros(0, cols)
    return rref(np.array(basis, dtype=object))[0]


def span(vectors: Iterable, dim: int) -> np.ndarray:
    """Canonical (RREF) basis of the span of the given vectors."""
    vs = [np.asarray(v, dtype=object) for v in vectors]
    if not vs:
        return zeros(0, dim)
    return rref(np.array(vs, dtype=object).reshape(len(vs), dim))[0]


def in_span(v, basis: np.ndarray) -> bool:
    """Membership of ``v`` in the row space of an RREF basis."""
    return reduce_mod(v, basis)[1]


def reduce_mod(v, basis: np.ndarray) -> tuple[np.ndarray, bool]:
    """Remainder of ``v`` after eliminating the pivots of an RREF basis."""
    v = normalize(np.asarray(v, dtype=object).copy())
    if basis.shape[0] == 0:
        return v, is_zero(v)
    _, pivots = rref(basis)
    for row, p in zip(basis, pivots):
        if v[p] != 0:
            v = v - v[p] * row
    return normalize(v), is_zero(v)


def inverse(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([normalize(m), eye(n)], axis=1)
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or red.shape[0] < n:
        raise np.linalg.LinAlgError("matrix is singular")
    return red[:, n:]


def transform3(t: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Rewrite a (2,1)-tensor t[i, j, k] in the basis f_a = sum_i P[i, a] e_i."""
    Pinv = inverse(P)
    # one index at a time keeps object-dtype einsum at O(n^4)
    t = np.einsum("ia,ijk->ajk", P, t)
    t = np.einsum("jb,ajk->abk", P, t)
    return normalize(np.einsum("ck,abk->abc", Pinv, t))


def trace(m: np.ndarray) -> Fraction:
    return sum((frac(m[i, i]) for i in range(m.shape[0])), Fraction(0))


def same_subspace(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape[0] != b.shape[0]:
        return False
    return a.shape[0] == 0 or bool(np.all(rref(a)[0] == rref(b)[0]))


def to_float(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr, dtype=float)


def fmt(x) -> str:
    """Rational scalar as the 'p/q' string used by every JSON format."""
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
