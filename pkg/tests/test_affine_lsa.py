import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_cybe import fixtures as fx
from affine_cybe import linalg as la
from affine_cybe.affine_lsa import (LSA, compatible, completeness, dual_lsa, eta_check, image_lsa,
                                    lsa_check, symplectic_lsa, transport_check)
from affine_cybe.lie_core import LieAlgebra, change_basis
from affine_cybe.rmatrix import Bivector, SymplecticForm, dual_bracket, r_from_omega


def table(rows):
    return la.qarray(rows)


AFF1_SYMPLECTIC = table([[[-1, 0], [0, 0]], [[0, -1], [0, 0]]])
AFF1_DUAL = table([[[0, 0], [-1, 0]], [[0, 0], [0, -1]]])


def test_zero_product_is_lsa():
    P = LSA(la.zeros(3, 3, 3))
    rep = lsa_check(P)
    assert rep.ok and la.is_zero(rep.bracket.c)


def test_associative_product_is_lsa():
    # 2x2 upper triangular matrices, basis E11, E12, E22
    a = la.zeros(3, 3, 3)
    a[0, 0, 0] = a[0, 1, 1] = a[1, 2, 1] = a[2, 2, 2] = 1
    assert lsa_check(LSA(a)).ok


def test_non_lsa_has_witness():
    a = la.zeros(2, 2, 2)
    a[0, 0, 1] = 1
    a[1, 0, 0] = 1
    rep = lsa_check(LSA(a))
    assert not rep.ok and rep.witness is not None


def test_symplectic_lsa_aff1_table():
    c = fx.BY_NAME["aff1"]
    P = symplectic_lsa(c.L, c.omega)
    assert np.all(P.a == AFF1_SYMPLECTIC)
    assert lsa_check(P).ok and compatible(P, c.L)


def test_symplectic_lsa_abelian_zero():
    c = fx.BY_NAME["abelian2"]
    assert la.is_zero(symplectic_lsa(c.L, c.omega).a)


def test_symplectic_lsa_fixtures(symplectic_case):
    c = symplectic_case
    P = symplectic_lsa(c.L, c.omega)
    assert lsa_check(P).ok and compatible(P, c.L)
    # tr L_x = tr ad*_x = -tr ad_x, and R_x = L_x - ad_x
    for i in range(c.L.dim):
        x = c.L.basis_vector(i)
        assert la.trace(P.right(x)) == -2 * la.trace(c.L.ad(x))


@given(st.sampled_from([c.name for c in fx.SYMPLECTIC]),
       st.lists(st.integers(-2, 2), min_size=16, max_size=16))
def test_symplectic_lsa_basis_change(name, entries):
    c = fx.BY_NAME[name]
    n = c.L.dim
    P = la.qarray(entries[: n * n], (n, n))
    if la.rank(P) < n:
        return
    L2 = change_basis(c.L, P)
    w2 = SymplecticForm(la.normalize(P.T @ c.omega.omega @ P))
    S = symplectic_lsa(L2, w2)
    assert lsa_check(S).ok and compatible(S, L2)
    assert S.equals(symplectic_lsa(c.L, c.omega).change_basis(P))


def test_dual_lsa_aff1_table():
    c = fx.BY_NAME["aff1"]
    D = dual_lsa(c.L, c.r)
    assert np.all(D.a == AFF1_DUAL)
    assert lsa_check(D).ok and compatible(D, dual_bracket(c.L, c.r))
    assert D.right_traces() == [0, -2]


def test_dual_lsa_cybe_fixtures(cybe_case):
    c = cybe_case
    D = dual_lsa(c.L, c.r)
    assert lsa_check(D).ok
    assert compatible(D, dual_bracket(c.L, c.r))
    assert eta_check(c.L, c.r) is None


def test_dual_lsa_zero_r():
    L = fx.algebra("sl2")
    assert la.is_zero(dual_lsa(L, Bivector(la.zeros(3, 3))).a)


def test_image_lsa_sl2():
    c = fx.BY_NAME["sl2_he"]
    img = image_lsa(c.L, c.r)
    assert all(img.checks.values())
    assert img.algebra.dim == 2
    assert img.algebra.c[0, 1, 1] == 2
    # omega_bar(h, e) = <-e*, r(h*)> = -1
    assert img.omega_bar[0, 1] == -1


def test_image_lsa_invertible_is_symplectic_lsa(symplectic_case):
    c = symplectic_case
    img = image_lsa(c.L, c.r)
    assert img.algebra.dim == c.L.dim
    assert img.lsa.equals(symplectic_lsa(c.L, c.omega))


def test_image_lsa_zero_r():
    img = image_lsa(fx.algebra("sl2"), Bivector(la.zeros(3, 3)))
    assert img.algebra.dim == 0


def test_completeness_values():
    aff = completeness(fx.BY_NAME["aff1"].L, fx.BY_NAME["aff1"].r)
    assert aff.traces == [0, -2] and not aff.complete and not aff.image_unimodular
    n4 = completeness(fx.BY_NAME["n4"].L, fx.BY_NAME["n4"].r)
    assert n4.complete and n4.traces == [0, 0, 0, 0]
    sl2 = completeness(fx.BY_NAME["sl2_he"].L, fx.BY_NAME["sl2_he"].r)
    assert not sl2.complete and not sl2.image_unimodular
    ab = completeness(fx.BY_NAME["abelian2"].L, fx.BY_NAME["abelian2"].r)
    assert ab.complete


def test_completeness_triad_consistent(cybe_case):
    rep = completeness(cybe_case.L, cybe_case.r)
    assert rep.cybe_ok and rep.consistent
    assert rep.kernel_abelian_ideal and rep.trace_factorizes


def test_completeness_flags_non_cybe():
    c = fx.BY_NAME["sl2_ef"]
    rep = completeness(c.L, c.r)
    assert not rep.cybe_ok and rep.as_dict()["claims_void"]


def test_transport_identities(symplectic_case):
    rep = transport_check(symplectic_case.L, symplectic_case.omega)
    assert rep.ok, rep.as_dict()
    assert not rep.sign_flip_applied
