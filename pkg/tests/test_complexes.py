import pytest

from cychom import complexes
from cychom import constructions as cons
from cychom.algebra import regular_bimodule
from cychom.errors import DegreeTooLarge, NotAComplex
from cychom.fields import QQ
from cychom.linalg import SparseMatrix, rank
from cychom.oracles import dual_numbers_mixed_hc, truncated_poly_hh

Q = lambda: cons.truncated_poly(QQ, 1)
DUAL = lambda: cons.truncated_poly(QQ, 2)
M2 = lambda: cons.matrix_algebra(QQ, 2)


def test_b_on_q_is_zero_map():
    b1 = complexes.hochschild_boundary(Q(), 1)
    assert b1.shape == (1, 1) and b1.is_zero()


def test_b_squares_to_zero_on_dual_numbers():
    A = DUAL()
    for n in range(2, 5):
        b = complexes.hochschild_boundary(A, n - 1) @ complexes.hochschild_boundary(A, n)
        assert b.is_zero()


def test_row_exactness_in_char_zero():
    A = M2()
    for n in range(4):
        rN = rank(complexes.cyclic_operator(A, n, "N"))
        rL = rank(complexes.cyclic_operator(A, n, "one_minus_lambda"))
        assert rN + rL == complexes.chain_dim(A, n)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_truncated_polynomials_match_resolution_oracle(m):
    A = cons.truncated_poly(QQ, m)
    assert complexes.hochschild_homology(A, 3).as_list() == truncated_poly_hh(m, 3)


def test_mixed_complex_oracle():
    assert dual_numbers_mixed_hc(5) == [2, 0, 2, 0, 2, 0]
    rep = complexes.cyclic_homology(DUAL(), 5, "all")
    assert rep.as_list() == [2, 0, 2, 0, 2, 0]


@pytest.mark.parametrize("method", ["quotient", "cyclic_bicomplex", "bB_bicomplex"])
def test_methods_agree(method):
    assert complexes.cyclic_homology(M2(), 3, method).as_list() == [1, 0, 1, 0]
    assert complexes.cyclic_homology(DUAL(), 3, method).as_list() == [2, 0, 2, 0]


def test_periodic_cyclic():
    assert complexes.periodic_cyclic(DUAL(), "even", 6).value == 1
    assert complexes.periodic_cyclic(M2(), "odd", 5).value == 0


def test_cohomology_with_regular_coefficients():
    # H^0(A, A) is the centre
    assert complexes.hochschild_cohomology(M2(), "A", 2).as_list() == [1, 0, 0]
    assert complexes.hochschild_cohomology(DUAL(), "A", 2).as_list() == [2, 1, 1]


def test_size_cap_reports_the_size():
    with pytest.raises(DegreeTooLarge) as exc:
        complexes.hochschild_homology(M2(), 4, size_cap=100)
    assert exc.value.size > exc.value.cap == 100


def test_sbi_morita_and_inner_audits():
    assert complexes.sbi_audit(DUAL(), 3)
    assert complexes.morita_audit(2, Q(), 2)
    A = M2()
    u = A.one() + A.basis("E:1,2")
    assert complexes.inner_action_audit(A, u, A.basis("E:2,1"), 2)


def test_identity_audit_catches_wrong_lambda_sign():
    A = M2()
    assert complexes.audit_passed(complexes.operator_identity_audit(A, 3))
    entries = complexes.operator_identity_audit(A, 3, lambda_sign=-1)
    assert complexes.first_failure(entries) is not None
    assert any(not e["passed"] and e["degree"] == 1 and e["identity"] == "Nb = b'N" for e in entries)


def test_chain_complex_rejects_non_complex():
    d1 = SparseMatrix.from_dense([[1]])
    d2 = SparseMatrix.from_dense([[1]])
    with pytest.raises(NotAComplex):
        complexes.ChainComplex({0: 1, 1: 1, 2: 1}, {1: d1, 2: d2}, QQ)


def test_hochschild_cocycle_check():
    A = DUAL()
    M = regular_bimodule(A)
    # f(x, x) = 1 is a cocycle; f(x, 1) = 1 is not
    assert complexes.is_hochschild_cocycle(A, M, 2, {("x", "x"): {"1": QQ.one}})
    assert not complexes.is_hochschild_cocycle(A, M, 2, {("x", "1"): {"1": QQ.one}})
