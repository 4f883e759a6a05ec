import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cychom import constructions as cons
from cychom.algebra import Element, dual_bimodule, regular_bimodule, validate_algebra
from cychom.complexes import hochschild_homology
from cychom.errors import (BadUnit, FuelExhausted, GroupAxiomError, GroupoidAxiomError, NotACocycle,
                           NotAssociative, NotCoprime)
from cychom.fields import QQ, CyclotomicField
from cychom.io import build


def hh(A, n=2):
    return hochschild_homology(A, n).as_list()


def upper_triangular():
    """T_2(Q): span of E11, E12, E22."""
    labels = ["E11", "E12", "E22"]
    structure = [("E11", "E11", "E11", 1), ("E11", "E12", "E12", 1),
                 ("E12", "E22", "E12", 1), ("E22", "E22", "E22", 1)]
    return validate_algebra(QQ, labels, {"E11": 1, "E22": 1}, structure, name="T2")


def test_matrix_algebra_basics():
    M = cons.matrix_algebra(QQ, 3)
    assert M.dim == 9 and not M.is_commutative()
    e = M.basis("E:1,2") * M.basis("E:2,3")
    assert e == M.basis("E:1,3")
    assert M.commutator_quotient_dim() == 1


def test_corrupted_structure_constants_are_caught():
    M = cons.matrix_algebra(QQ, 2)
    structure = list(M.structure_entries())
    i, j, k, c = structure[3]
    structure[3] = (i, j, k, 2 * c)
    with pytest.raises((NotAssociative, BadUnit)):
        validate_algebra(QQ, M.labels, M.unit, structure)
    bad = [(i, j, k, c) for (i, j, k, c) in M.structure_entries()] + [("E:1,2", "E:1,2", "E:1,1", 1)]
    with pytest.raises(NotAssociative) as exc:
        validate_algebra(QQ, M.labels, M.unit, bad)
    assert len(exc.value.triple) == 3


def test_opposite_has_same_hochschild_homology():
    T = upper_triangular()
    # HH_0 is spanned by the two vertex idempotents
    assert hh(T, 3) == hh(cons.opposite(T), 3) == [2, 0, 0, 0]
    Top = cons.opposite(T)
    assert Top.basis("E12") * Top.basis("E11") == Top.basis("E12")


def test_disjoint_union_is_direct_sum():
    G = cons.disjoint_union(cons.group_as_groupoid(cons.cyclic_group(2)), cons.pairs_groupoid(2))
    A = cons.groupoid_algebra(QQ, G)
    B = cons.direct_sum(cons.group_algebra(QQ, cons.cyclic_group(2)), cons.matrix_algebra(QQ, 2))
    assert A.dim == B.dim == 6
    assert hh(A) == hh(B) == [3, 0, 0]


def test_trivial_crossed_product_is_tensor_product():
    A = cons.truncated_poly(QQ, 2)
    G = cons.cyclic_group(2)
    X = cons.crossed_product(A, cons.trivial_action(G, A))
    T = cons.tensor_product(A, cons.group_algebra(QQ, G))
    assert X.dim == T.dim == 4
    assert X.is_commutative() and T.is_commutative()
    assert hh(X) == hh(T)


def test_swap_action_gives_matrix_algebra():
    spec = {"construct": "crossed_product",
            "base": {"construct": "direct_sum", "summands": [{"construct": "truncated_poly", "m": 1}] * 2},
            "group": {"cyclic": 2},
            "action": {"0": [["1", "0"], ["0", "1"]], "1": [["0", "1"], ["1", "0"]]}}
    A = build(spec)
    assert A.dim == 4 and not A.is_commutative()
    assert hh(A) == [1, 0, 0]


def test_groupoid_axioms():
    P = cons.pairs_groupoid(3)
    assert len(P.morphisms) == 9
    T = cons.transitive_groupoid(2, cons.cyclic_group(2))
    assert len(T.morphisms) == 8
    with pytest.raises(GroupoidAxiomError):
        cons.Groupoid(["x"], ["a"], {"a": "x"}, {"a": "x"}, {}, {"x": "a"})


def test_group_table_errors():
    with pytest.raises(GroupAxiomError):
        cons.group_from_table(["e", "a"], {"e,e": "e", "e,a": "a", "a,e": "a", "a,a": "a"}, "e")


def test_group_algebra_centre():
    S3 = cons.symmetric_group(3)
    A = cons.group_algebra(QQ, S3)
    assert len(S3.conjugacy_classes()) == 3
    assert A.commutator_quotient_dim() == 3


def test_weyl_torus():
    A = cons.weyl_torus(1, 3)
    U, V = A.basis("U^1V^0"), A.basis("U^0V^1")
    z = A.field.root_of_unity(1)
    assert V * U == (U * V).scale(z)
    assert U ** 3 == A.one()
    with pytest.raises(NotCoprime):
        cons.weyl_torus(2, 4)


def test_polynomial_torus_commutation():
    T = cons.polynomial_torus()
    t = T.field.gen()
    assert T.V * T.U == (T.U * T.V).scale(t)
    tau = T.traces["tau"]
    assert tau(T.U * T.basis((-1, 0))) == 1


def test_rewriting_presets_and_fuel():
    H = cons.hopf_sphere_algebra()
    assert H.field == CyclotomicField(4)
    e = cons.hopf_idempotent(H)
    assert e * e == e
    P = cons.podles_sphere_algebra()
    q = cons.podles_idempotent(P)
    assert q * q == q
    loop = cons.RewritingSystem(["a", "b"], {("a", "b"): {("b", "a"): QQ.one},
                                             ("b", "a"): {("a", "b"): QQ.one}}, QQ, fuel=50)
    with pytest.raises(FuelExhausted):
        loop.normal_form(("a", "b"))


def test_extension_from_nontrivial_cocycle():
    A = cons.truncated_poly(QQ, 2)
    B = build({"construct": "extension", "base": {"construct": "truncated_poly", "m": 2},
               "module": {"labels": ["m"]}, "cocycle": [{"a": "x", "b": "x", "m": "m", "c": "1"}]})
    x = B.basis("a:x")
    assert x * x == B.basis("m:m") and not x * x * x
    assert hh(B, 3) == hh(cons.truncated_poly(QQ, 3), 3) == [3, 2, 2, 2]
    M = regular_bimodule(A)
    with pytest.raises(NotACocycle):
        cons.extension_from_2cocycle(A, M, {("x", "1"): {"1": QQ.one}})


def test_dual_bimodule_validates():
    for A in (cons.matrix_algebra(QQ, 2), upper_triangular()):
        dual_bimodule(A).validate()
        regular_bimodule(A).validate()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9), st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_weyl_products_associate(a, b):
    A = cons.weyl_torus(1, 3)
    x = Element(A, dict(zip(A.labels, a)))
    y = Element(A, dict(zip(A.labels, b)))
    z = A.basis("U^1V^1")
    assert (x * y) * z == x * (y * z)
