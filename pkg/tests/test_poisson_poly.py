import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_cybe import fixtures as fx
from affine_cybe import linalg as la
from affine_cybe import poisson_poly as pp
from affine_cybe.lie_core import LieAlgebra
from affine_cybe.pipeline import bracket_from_formula, random_covectors
from affine_cybe.rmatrix import SymplecticForm, omega_closed_witness, q_map
from strategies import rational_vectors, vec

AFF1 = fx.BY_NAME["aff1"]
N4 = fx.BY_NAME["n4"]


def test_cocycle_examples():
    ab = LieAlgebra.abelian(3)
    q = la.qarray([[1, 2, 0], [0, 1, 5], [3, 0, 0]])
    assert pp.cocycle_check(ab, q) is None
    assert pp.cocycle_check(AFF1.L, q_map(AFF1.omega)) is None
    # e_i -> e_i*: q([e1,e2]) = e2* but ad*_{e1} e2* - ad*_{e2} e1* = -e2*
    assert pp.cocycle_check(AFF1.L, la.eye(2)) == (0, 1)


@given(st.sampled_from(["aff1", "n4", "aff1x2", "h3", "sl2"]), st.data())
def test_cocycle_iff_closed(name, data):
    L = fx.algebra(name)
    n = L.dim
    vals = data.draw(st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n))
    m = la.qarray(vals, (n, n))
    w = SymplecticForm(la.normalize(m - m.T))
    assert (pp.cocycle_check(L, q_map(w)) is None) == (omega_closed_witness(L, w) is None)


def test_q_exp_abelian():
    L = LieAlgebra.abelian(2)
    w = fx.BY_NAME["abelian2"].omega
    pt = pp.q_exp(L, q_map(w), vec(3, -1), 5)
    assert pt.exact and pt.terms == 1
    assert np.all(pt.value == q_map(w) @ vec(3, -1))


def test_q_exp_n4_terminates():
    q = q_map(N4.omega)
    for a in (vec(1, 0, 0, 0), vec(1, 2, -1, 3), vec(0, 1, 1, 0)):
        base = pp.q_exp(N4.L, q, a, 3)
        assert base.exact and base.terms <= 3
        for K in (4, 7, 30):
            assert np.all(pp.q_exp(N4.L, q, a, K).value == base.value)


def test_q_exp_aff1_closed_form():
    # ad*_{e1} = diag(0, -1) and q(e1) = e2*, so Q(exp e1) = (1 - 1/e) e2*
    pt = pp.q_exp(AFF1.L, q_map(AFF1.omega), vec(1, 0), 20)
    assert not pt.exact
    assert pt.tail_bound < 1e-15
    assert abs(pt.value[1] - (1 - math.exp(-1))) < 1e-15 and pt.value[0] == 0


@pytest.mark.parametrize("K", [2, 3, 5, 8, 12])
def test_tail_bound_is_an_upper_bound(K):
    pt = pp.q_exp(AFF1.L, q_map(AFF1.omega), vec(2, 0), K)
    # Q(exp 2 e1) = (1 - e^{-2}) e2*
    exact = 1 - math.exp(-2)
    assert abs(pt.value[1] - exact) <= pt.tail_bound


def test_delta_examples():
    assert la.is_zero(pp.delta(LieAlgebra.abelian(2), vec(1, 1)))
    assert la.is_zero(pp.delta(AFF1.L, vec(1, 0)))
    assert np.all(pp.delta(AFF1.L, vec(0, 1)) == la.qarray([[0, 1], [-1, 0]]))


def test_delta_invariant_covectors_zero():
    for name in ("h3", "n4", "aff1"):
        L = fx.algebra(name)
        for xi in pp.invariant_covectors(L):
            assert la.is_zero(pp.delta(L, xi))


def test_poly_tensor_abelian_zero():
    P = pp.poly_tensor(LieAlgebra.abelian(2), fx.BY_NAME["abelian2"].omega)
    assert P.degree() == -1


def test_poly_tensor_aff1_coefficients():
    P = pp.poly_tensor(AFF1.L, AFF1.omega)
    # {e1, e2} = -xi2 + xi2^2
    assert list(P.linear[0, 1]) == [0, -1]
    assert P.quadratic[0, 1].tolist() == [[0, 0], [0, 1]]
    assert la.is_zero(P.constant)
    for xi in random_covectors(2, 10, seed=11):
        assert P.evaluate(xi)[0, 1] == -xi[1] + xi[1] ** 2
        assert P.evaluate(xi)[0, 1] == bracket_from_formula(AFF1.L, AFF1.r, vec(1, 0), vec(0, 1), xi)


def test_poly_tensor_structure(symplectic_case):
    c = symplectic_case
    P = pp.poly_tensor(c.L, c.omega)
    assert la.is_zero(P.constant) and P.antisymmetric() and P.degree() <= 2
    assert np.all(P.quadratic == np.swapaxes(P.quadratic, 2, 3))
    e = la.eye(c.L.dim)
    for xi in random_covectors(c.L.dim, 10, seed=4):
        M = P.evaluate(xi)
        for i in range(c.L.dim):
            for j in range(c.L.dim):
                assert M[i, j] == bracket_from_formula(c.L, c.r, e[i], e[j], xi)


def test_poly_tensor_degrees():
    # on n4 every ad*_x xi lies in span{e1*, e2*, e3*} and r pairs e1* only with e4*,
    # so the quadratic part vanishes; aff(1) and aff(1)+aff(1) are genuinely quadratic
    assert pp.poly_tensor(N4.L, N4.omega).degree() == 1
    assert pp.poly_tensor(AFF1.L, AFF1.omega).degree() == 2
    c = fx.BY_NAME["aff1x2"]
    assert pp.poly_tensor(c.L, c.omega).degree() == 2


def test_lambda_sharp_zero_and_aff1():
    assert la.is_zero(pp.lambda_sharp(AFF1.L, AFF1.omega, vec(0, 0)))
    # at e2* the correction delta(e2*) cancels q exactly
    assert la.is_zero(pp.lambda_sharp(AFF1.L, AFF1.omega, vec(0, 1)))
    assert pp.sharp_consistent(AFF1.L, AFF1.omega, vec(0, 1))


def test_lambda_sharp_consistency_100(symplectic_case):
    c = symplectic_case
    for xi in random_covectors(c.L.dim, 100, seed=2024):
        assert pp.sharp_consistent(c.L, c.omega, xi)


def test_lambda_sharp_invariant_point_zero():
    for xi in pp.invariant_covectors(N4.L):
        assert la.is_zero(pp.lambda_sharp(N4.L, N4.omega, xi))


def test_schouten_zero_tensor():
    n = 3
    Z = pp.PolyPoisson(la.zeros(n, n), la.zeros(n, n, n), la.zeros(n, n, n, n))
    assert pp.schouten_poly(Z).jacobi_ok


@pytest.mark.parametrize("name", ["aff1", "sl2", "h3", "n4", "aff1x2"])
def test_schouten_lie_poisson(name):
    assert pp.schouten_poly(pp.PolyPoisson.lie_poisson(fx.algebra(name))).jacobi_ok


def test_schouten_detects_broken_jacobi():
    broken = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    rep = pp.schouten_poly(pp.PolyPoisson.lie_poisson(broken))
    assert not rep.jacobi_ok and rep.nonzero()


def test_schouten_detects_bad_quadratic():
    n = 3
    Q = la.zeros(n, n, n, n)
    # {e1, e2} = xi3^2, {e1, e3} = xi1^2 has a nonzero Jacobiator
    Q[0, 1, 2, 2], Q[1, 0, 2, 2] = 1, -1
    Q[0, 2, 0, 0], Q[2, 0, 0, 0] = 1, -1
    rep = pp.schouten_poly(pp.PolyPoisson(la.zeros(n, n), la.zeros(n, n, n), Q))
    assert not rep.jacobi_ok


def test_schouten_poly_tensor(symplectic_case):
    assert pp.schouten_poly(pp.poly_tensor(symplectic_case.L, symplectic_case.omega)).jacobi_ok


def test_dim6_fixture_poisson():
    c = fx.LARGE[0]
    P = pp.poly_tensor(c.L, c.omega)
    assert P.degree() == 2 and pp.schouten_poly(P).jacobi_ok
    for xi in random_covectors(6, 5, seed=8):
        assert pp.sharp_consistent(c.L, c.omega, xi, tensor=P)
    for a in pp.sample_points(6, 5, seed=8):
        assert pp.leaf_rank(c.L, c.omega, a).equal


def test_cohomology_zero_point():
    rep = pp.cohomology_check(AFF1.L, AFF1.omega, vec(0, 0))
    assert rep.exact and rep.residual == 0


def test_cohomology_n4_exact():
    rep = pp.cohomology_check(N4.L, N4.omega, vec(1, 0, 0, 0))
    assert rep.exact and rep.residual == 0 and rep.ok


def test_cohomology_aff1_k30():
    rep = pp.cohomology_check(AFF1.L, AFF1.omega, vec(1, 0), 30)
    assert not rep.exact and rep.residual < 1e-12


@pytest.mark.parametrize("name,a", [("aff1", (2, 1)), ("aff1x2", (2, 1, -2, 1))])
def test_cohomology_residual_factorial_decay(name, a):
    c = fx.BY_NAME[name]
    prev = None
    for K in (4, 6, 8, 10, 12):
        res = pp.cohomology_check(c.L, c.omega, la.qarray(list(a)), K).residual
        # |a| = 3 drives the series: residual <= 3^K / K! times a modest constant
        assert res <= 50 * 3 ** K / math.factorial(K)
        if prev is not None:
            assert res < prev
        prev = res


def test_leaf_rank_examples():
    ab = fx.BY_NAME["abelian2"]
    rep = pp.leaf_rank(ab.L, ab.omega, vec(1, 2))
    assert rep.rank_lambda == rep.rank_coadjoint == 0
    rep = pp.leaf_rank(N4.L, N4.omega, vec(1, 0, 0, 0))
    assert rep.point.exact and rep.equal
    # ad*_{e2} is nilpotent on aff(1), so this point is exact too
    rep = pp.leaf_rank(AFF1.L, AFF1.omega, vec(0, 1))
    assert rep.equal


def test_leaf_rank_samples(symplectic_case):
    c = symplectic_case
    pts = pp.sample_points(c.L.dim, 20, seed=7)
    reps = [pp.leaf_rank(c.L, c.omega, a) for a in pts]
    assert all(r.equal for r in reps)
    assert sum(r.indeterminate for r in reps) == 0
    if c.nilpotent:
        assert all(r.point.exact for r in reps)


def test_sample_points_reproducible():
    a = pp.sample_points(4, 5, seed=1)
    b = pp.sample_points(4, 5, seed=1)
    assert all(np.all(x == y) for x, y in zip(a, b))
    assert all(-2 <= v <= 2 for x in a for v in x)


def test_numeric_rank_indeterminate_band():
    m = np.diag([1.0, 1e-8 * 1.5])
    rank, unclear = pp._numeric_rank(m, 1e-8)
    assert unclear
    rank, unclear = pp._numeric_rank(np.diag([1.0, 1e-3]), 1e-8)
    assert rank == 2 and not unclear
