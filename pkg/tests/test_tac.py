import pytest

from qshape.algebras import (AModule, dual_numbers, field_algebra,
                             simple_module_dual_numbers)
from qshape.errors import NotObjectwiseProjective, WindowInsufficient
from qshape.fields import GF
from qshape.linalg import Matrix
from qshape.functors import (_iso_in_hom_space, induce, stalk,
                             tensor_with_module)
from qshape.qmods import NatSpace, QModMap, zero_qmod
from qshape.shapes import complex_window
from qshape.structures import ABELIAN, SPLIT, theta_structure
from qshape.tac import TacWindow, canonical_tac, sigma_n, verify_totally_acyclic

F101 = GF(101)


@pytest.fixture(scope="module")
def C():
    return complex_window(F101, -8, 9)


@pytest.fixture(scope="module")
def kalg():
    return field_algebra(F101)


def kmod(kalg, d=1):
    return AModule(kalg, d, [Matrix.identity(F101, d)])


def test_canonical_tac_of_stalk_shape(C, kalg):
    S0 = stalk(C, "0", kmod(kalg))
    W = canonical_tac(S0, ABELIAN, (-3, 3))
    # negative terms are shifted discs, positive terms discs on the other side
    assert W.term(-1).support == ["0", "1"]
    assert W.term(-2).support == ["1", "2"]
    assert W.term(-3).support == ["2", "3"]
    assert W.term(0).support == ["-1", "0"]
    assert W.term(1).support == ["-2", "-1"]
    assert W.cycle(0) is S0
    assert W.cycle(-1).support == ["1"]
    assert W.cycle(1).support == ["-1"]


def test_canonical_tac_zero(C, kalg):
    W = canonical_tac(zero_qmod(C, kalg), ABELIAN, (-2, 2))
    assert all(t.is_zero() for t in W.terms.values())


def test_sigma_shifts_of_stalk(C, kalg):
    S0 = stalk(C, "0", kmod(kalg))
    assert sigma_n(S0, 0, ABELIAN) is S0
    assert sigma_n(S0, -1, ABELIAN).support == ["1"]
    assert sigma_n(S0, -2, ABELIAN).support == ["2"]
    assert sigma_n(S0, 1, ABELIAN).support == ["-1"]
    assert sigma_n(S0, 2, ABELIAN).support == ["-2"]


def test_tac_verifies(C, kalg):
    S0 = stalk(C, "0", kmod(kalg))
    W = canonical_tac(S0, ABELIAN, (-3, 3))
    report = verify_totally_acyclic(W, [kmod(kalg)])
    assert report["ok"], report


def test_tac_verifies_dual_numbers_split(C):
    D = dual_numbers(F101)
    S = stalk(C, "0", D.regular_module())
    W = canonical_tac(S, SPLIT, (-2, 2))
    report = verify_totally_acyclic(W, [D.regular_module(),
                                        simple_module_dual_numbers(D)])
    assert report["ok"], report


def test_doctored_window_fails_at_right_degree(C, kalg):
    S0 = stalk(C, "0", kmod(kalg))
    W = canonical_tac(S0, ABELIAN, (-3, 3))
    bad_diffs = dict(W.diffs)
    victim = -2
    bad_diffs[victim] = QModMap(W.term(victim), W.term(victim + 1), {})
    bad = TacWindow(W.base, W.structure, W.dlo, W.dhi, W.terms, bad_diffs,
                    W.cycles, W.cycle_incls, W.cycle_projs)
    report = verify_totally_acyclic(bad, [kmod(kalg)])
    assert not report["ok"]
    assert any(f["degree"] == victim and f["check"] == "factorisation-match"
               for f in report["failures"])


def test_tac_requires_objectwise_projective(C):
    D = dual_numbers(F101)
    k = simple_module_dual_numbers(D)
    Sk = stalk(C, "0", k)
    with pytest.raises(NotObjectwiseProjective):
        canonical_tac(Sk, ABELIAN, (-2, 2))
    # but k is projective for the theta structure containing it
    W = canonical_tac(Sk, theta_structure([D.regular_module(), k]), (-1, 1))
    assert W.term(-1).dim("0") == k.dim


def test_window_insufficient_near_boundary(C, kalg):
    S = stalk(C, "8", kmod(kalg))
    with pytest.raises(WindowInsufficient):
        canonical_tac(S, ABELIAN, (-3, 3))


def test_tensor_compatibility_termwise(C, kalg):
    # tac(U (x) T) is termwise isomorphic to tac(U) (x) T
    D = dual_numbers(F101)
    T = D.regular_module()
    U = stalk(C, "0", kmod(kalg))
    UT = tensor_with_module(U, T)
    W_U = canonical_tac(U, ABELIAN, (-2, 2))
    W_UT = canonical_tac(UT, ABELIAN, (-2, 2))
    for m in range(-2, 3):
        lhs = tensor_with_module(W_U.term(m), T)
        rhs = W_UT.term(m)
        assert [lhs.dim(p) for p in C.objects] == [rhs.dim(p) for p in C.objects]
        iso = _iso_in_hom_space(NatSpace(lhs, rhs))
        assert iso is not None, m
    # sigma compatibility
    for n in (-2, -1, 1, 2):
        lhs = tensor_with_module(sigma_n(U, n, ABELIAN), T)
        rhs = sigma_n(UT, n, ABELIAN)
        iso = _iso_in_hom_space(NatSpace(lhs, rhs))
        assert iso is not None, n


def test_gluing_consistency(C, kalg):
    # the stored negative cycles agree with kernels of the differentials
    from qshape.qmods import kernel_qmod
    S0 = stalk(C, "0", kmod(kalg))
    W = canonical_tac(S0, ABELIAN, (-3, 2))
    for m in (-2, -1, 0, 1):
        K, _ = kernel_qmod(W.diff(m))
        cy = W.cycle(m)
        assert [K.dim(p) for p in C.objects] == [cy.dim(p) for p in C.objects]
        iso = _iso_in_hom_space(NatSpace(cy, K))
        assert iso is not None, m
