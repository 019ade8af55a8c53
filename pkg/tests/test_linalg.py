from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_cybe import linalg as la
from strategies import small_rational


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        la.frac(0.5)
    assert la.frac("3/6") == Fraction(1, 2)
    assert la.frac(np.int64(4)) == 4


def test_rref_and_rank():
    m = la.qarray([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    red, piv = la.rref(m)
    assert piv == [0, 1]
    assert la.rank(m) == 2
    assert red.shape == (2, 3)


def test_nullspace_kills_matrix():
    m = la.qarray([[1, 2, 3], [2, 4, 6]])
    ns = la.nullspace(m)
    assert ns.shape[0] == 2
    assert la.is_zero(la.normalize(m @ ns.T))


def test_inverse_singular_raises():
    with pytest.raises(np.linalg.LinAlgError):
        la.inverse(la.qarray([[1, 2], [2, 4]]))


def square(n):
    return st.lists(small_rational, min_size=n * n, max_size=n * n).map(lambda xs: la.qarray(xs, (n, n)))


@given(st.integers(1, 4).flatmap(square))
def test_rank_nullity(m):
    assert la.rank(m) + la.nullspace(m).shape[0] == m.shape[1]


@given(st.integers(1, 4).flatmap(square))
def test_inverse_roundtrip(m):
    if la.rank(m) < m.shape[0]:
        return
    assert np.all(la.normalize(m @ la.inverse(m)) == la.eye(m.shape[0]))


@given(st.integers(1, 4).flatmap(square))
def test_rank_matches_float_rank(m):
    assert la.rank(m) == np.linalg.matrix_rank(la.to_float(m))


def test_span_membership():
    basis = la.span([la.qarray([1, 1, 0]), la.qarray([0, 1, 1])], 3)
    assert la.in_span(la.qarray([1, 2, 1]), basis)
    assert not la.in_span(la.qarray([1, 0, 0]), basis)
    assert la.same_subspace(basis, la.span([la.qarray([1, 2, 1]), la.qarray([1, 0, -1])], 3))
