import numpy as np
import pytest
from hypothesis import given

from affine_cybe import fixtures as fx
from affine_cybe import linalg as la
from affine_cybe.lie_core import (AlgebraError, LieAlgebra, bracket, center, change_basis, coadjoint,
                                  cotangent_algebra, derived_series, direct_sum, quotient, solvable,
                                  subalgebra, unimodular)
from strategies import algebra_and_vectors, lie_algebras, vec


def test_bracket_examples():
    aff = fx.algebra("aff1")
    assert np.all(bracket(aff, vec(1, 0), vec(0, 1)) == vec(0, 1))
    sl2 = fx.algebra("sl2")
    assert np.all(bracket(sl2, vec(0, 1, 0), vec(0, 0, 1)) == vec(1, 0, 0))


@given(algebra_and_vectors(1))
def test_bracket_alternating(data):
    L, x = data
    assert la.is_zero(bracket(L, x, x))


def test_jacobi_fixtures():
    for name in ("aff1", "sl2", "h3", "n4", "abelian2", "aff1x2"):
        assert fx.algebra(name).jacobi.ok


def test_jacobi_broken_witness():
    L = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    rep = L.jacobi
    assert not rep.ok and rep.witness == (0, 1, 2)
    with pytest.raises(AlgebraError):
        L.require_valid()


def test_non_antisymmetric_rejected():
    c = la.zeros(2, 2, 2)
    c[0, 1, 1] = 1
    with pytest.raises(AlgebraError):
        LieAlgebra(c)


def test_coadjoint_aff1():
    aff = fx.algebra("aff1")
    assert np.all(coadjoint(aff, vec(1, 0), vec(0, 1)) == vec(0, -1))
    # ad*_{e2}(x1 e1* + x2 e2*) = x2 e1*
    assert np.all(coadjoint(aff, vec(0, 1), vec(3, 5)) == vec(5, 0))


@given(algebra_and_vectors(2))
def test_coadjoint_is_representation(data):
    L, x, y = data
    lhs = L.coad(bracket(L, x, y))
    rhs = la.normalize(L.coad(x) @ L.coad(y) - L.coad(y) @ L.coad(x))
    assert np.all(lhs == rhs)


def test_center_examples():
    assert center(LieAlgebra.abelian(2)).shape[0] == 2
    assert center(fx.algebra("aff1")).shape[0] == 0
    z = center(fx.algebra("h3"))
    assert la.same_subspace(z, vec(0, 0, 1).reshape(1, 3))


def test_unimodular_and_solvable():
    aff, sl2 = fx.algebra("aff1"), fx.algebra("sl2")
    assert not unimodular(aff) and solvable(aff)
    assert unimodular(sl2) and not solvable(sl2)
    assert unimodular(fx.algebra("n4")) and unimodular(fx.algebra("h3"))
    assert len(derived_series(sl2)) == 1


@given(lie_algebras())
def test_unimodular_basis_invariant(L):
    P = la.eye(L.dim)
    P[0, -1] = la.frac(2)
    if L.dim > 1:
        assert unimodular(change_basis(L, P)) == unimodular(L)
        assert change_basis(L, P).jacobi.ok


def test_quotient_and_subalgebra():
    h3 = fx.algebra("h3")
    Q = quotient(h3, center(h3))
    assert Q.dim == 2 and la.is_zero(Q.c)
    S = subalgebra(fx.algebra("sl2"), la.qarray([[1, 0, 0], [0, 1, 0]]))
    assert S.c[0, 1, 1] == 2
    with pytest.raises(AlgebraError):
        quotient(fx.algebra("sl2"), la.qarray([[1, 0, 0]]))


def test_direct_sum_dims():
    D = direct_sum(fx.algebra("aff1"), fx.algebra("sl2"))
    assert D.dim == 5 and D.jacobi.ok


@given(lie_algebras(max_dim=5))
def test_cotangent_algebra_jacobi_and_invariance(L):
    T = cotangent_algebra(L)
    assert T.alg.jacobi.ok
    assert T.is_orthogonal()
    n = L.dim
    eye = la.eye(2 * n)
    assert T.is_isotropic(eye[:n]) and T.is_isotropic(eye[n:])
