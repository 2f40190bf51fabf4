import pytest

from qshape.algebras import (AModule, dual_numbers, field_algebra,
                             simple_module_dual_numbers)
from qshape.errors import ObjectOutsideWindow, WindowInsufficient
from qshape.fields import GF
from qshape.linalg import Matrix
from qshape.functors import cover_of, induce, stalk
from qshape.qmods import (QMod, QModMap, ShortSeq, direct_sum_qmod, evaluate,
                          hom_QA_dim, identity_map, is_short_exact,
                          kernel_qmod, image_qmod, cokernel_qmod,
                          representable_right, tensor_over_Q, underlying_k,
                          validate_qmod, zero_qmod)
from qshape.shapes import complex_window

F101 = GF(101)


@pytest.fixture(scope="module")
def C():
    return complex_window(F101, -4, 6)


@pytest.fixture(scope="module")
def kalg():
    return field_algebra(F101)


def kmod(kalg, d):
    return AModule(kalg, d, [Matrix.identity(F101, d)])


def disc(C, kalg, q):
    """Identity complex k -> k in degrees q, q+1."""
    return induce(C, str(q), kmod(kalg, 1), "F")


def test_zero_validates(C, kalg):
    assert validate_qmod(zero_qmod(C, kalg))["ok"]


def test_disc_validates_and_dims(C, kalg):
    X = disc(C, kalg, 0)
    assert validate_qmod(X)["ok"]
    assert X.dim("0") == 1 and X.dim("1") == 1 and X.dim("2") == 0


def test_relation_violation_detected(C, kalg):
    one = kmod(kalg, 1)
    X = QMod(C, kalg, {"0": one, "1": one, "2": one},
             {"d0": Matrix.identity(F101, 1), "d1": Matrix.identity(F101, 1)})
    report = validate_qmod(X)
    assert not report["ok"]
    assert report["witness"][0] == "relation"


def test_hom_stalk_endomorphisms(C, kalg):
    S = stalk(C, "0", kmod(kalg, 1))
    assert hom_QA_dim(S, S) == 1
    assert hom_QA_dim(zero_qmod(C, kalg), S) == 0


def test_hom_disc_to_stalk(C, kalg):
    F0 = disc(C, kalg, 0)
    S0 = stalk(C, "0", kmod(kalg, 1))
    assert hom_QA_dim(F0, S0) == 1   # the counit component
    assert hom_QA_dim(S0, F0) == 0   # no section of the counit


def test_kernel_of_counit_is_shifted_stalk(C, kalg):
    S0 = stalk(C, "0", kmod(kalg, 1))
    cover, eps = cover_of(S0)
    K, incl = kernel_qmod(eps)
    assert K.support == ["1"]
    assert K.dim("1") == 1
    ok, witness = incl.is_natural_a_linear()
    assert ok, witness


def test_kernel_image_short_exact(C, kalg):
    F0 = disc(C, kalg, 0)
    S0 = stalk(C, "0", kmod(kalg, 1))
    eps = QModMap(F0, S0, {"0": Matrix.identity(F101, 1)})
    assert eps.is_natural_a_linear()[0]
    K, incl = kernel_qmod(eps)
    I, iincl = image_qmod(eps)
    s = ShortSeq(incl, eps)
    assert is_short_exact(s)
    Ck, proj = cokernel_qmod(eps)
    assert Ck.is_zero()


def test_direct_sum_and_identity(C, kalg):
    X = disc(C, kalg, 0)
    Z = zero_qmod(C, kalg)
    S, incs, projs = direct_sum_qmod([X, Z])
    assert S.total_dim() == X.total_dim()
    assert hom_QA_dim(S, X) == hom_QA_dim(X, X)
    idm = identity_map(X)
    assert idm.is_natural_a_linear()[0]


def test_evaluate_and_stalk_values(C):
    D = dual_numbers(F101)
    T = D.regular_module()
    S = stalk(C, "2", T)
    assert evaluate(S, "2").dim == T.dim
    assert evaluate(S, "3").dim == 0
    with pytest.raises(ObjectOutsideWindow):
        evaluate(S, "99")


def test_underlying_k_dims(C):
    D = dual_numbers(F101)
    S = stalk(C, "0", D.regular_module())
    U = underlying_k(S)
    assert U.algebra.dim == 1
    assert U.dim("0") == 2


def test_underlying_preserves_short_exact(C):
    D = dual_numbers(F101)
    k = simple_module_dual_numbers(D)
    A = D.regular_module()
    Sk = stalk(C, "0", k)
    SA = stalk(C, "0", A)
    iota = QModMap(Sk, SA, {"0": Matrix.from_rows(F101, [[0], [1]])})
    pi = QModMap(SA, Sk, {"0": Matrix.from_rows(F101, [[1, 0]])})
    s = ShortSeq(iota, pi)
    assert is_short_exact(s)
    Uiota = QModMap(underlying_k(Sk), underlying_k(SA), dict(iota.components))
    Upi = QModMap(underlying_k(SA), underlying_k(Sk), dict(pi.components))
    assert is_short_exact(ShortSeq(Uiota, Upi))


def test_tensor_stalk_against_stalk(C, kalg):
    D = dual_numbers(F101)
    Cop = C.opposite()
    R = QMod(Cop, kalg, {"0": kmod(kalg, 1)}, {}, name="rstalk")
    X = stalk(C, "0", D.regular_module())
    T = tensor_over_Q(R, X)
    assert T.dim == 2  # k (x) A = A
    assert tensor_over_Q(R, zero_qmod(C, D)).dim == 0


def test_tensor_co_yoneda(C, kalg):
    # Q(-, q) (x)_Q X = X(q)
    D = dual_numbers(F101)
    Cop = C.opposite()
    X = direct_sum_qmod([stalk(C, "0", D.regular_module()),
                         induce(C, "1", D.regular_module(), "F")])[0]
    for q in ("0", "1", "2"):
        R = representable_right(C, Cop, q)
        T = tensor_over_Q(R, X)
        assert T.dim == X.dim(q)


def test_tensor_boundary_raises(C, kalg):
    Cop = C.opposite()
    hi = "6"
    R = QMod(Cop, kalg, {hi: kmod(kalg, 1)}, {})
    X = stalk(C, hi, kmod(kalg, 1))
    with pytest.raises(WindowInsufficient):
        tensor_over_Q(R, X)


def test_hom_additive_in_target(C, kalg):
    X = disc(C, kalg, 0)
    Y = stalk(C, "0", kmod(kalg, 1))
    Z = stalk(C, "1", kmod(kalg, 1))
    S, _, _ = direct_sum_qmod([Y, Z])
    assert hom_QA_dim(X, S) == hom_QA_dim(X, Y) + hom_QA_dim(X, Z)
