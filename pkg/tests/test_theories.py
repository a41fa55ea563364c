import pytest

from superfermat import (FinitePresentation, OddGeneratorPresent, Signature, SuperMorphism,
                         SuperPoly, TheoryTag, check_product_preservation, compose, coproduct_free,
                         iota_lower_shriek, product_algebra, reduce_rd, ParityMismatch,
                         SignatureMismatch, TheoryMismatch, NotFiniteDimensional)
from superfermat.theories import (cotuple, even_dimension, identity_morphism, odd_dimension,
                                  reduce_morphism, structure_table)
from superfermat.parser import parse_superpoly


def P(src, sig):
    return parse_superpoly(src, sig)


def pres(sig, *rels):
    sig = Signature(*sig)
    return FinitePresentation.of(sig, [P(r, sig) for r in rels])


def morph(src, tgt, evens, odds):
    return SuperMorphism(src, tgt, [P(e, tgt) for e in evens], [P(o, tgt) for o in odds])


def test_compose_examples():
    f = morph((1, 1), (1, 2), ["x1^2"], ["xi1*xi2*xi1 + xi2"])
    assert compose(identity_morphism((1, 1)), f) == f
    sq = morph((1, 0), (1, 0), ["x1^2"], [])
    shift = morph((1, 0), (1, 0), ["x1 + 1"], [])
    # images of compose(f, g) are g applied to the images of f
    assert compose(sq, shift).even_images == (P("(x1 + 1)^2", (1, 0)),)
    assert compose(shift, sq).even_images == (P("x1^2 + 1", (1, 0)),)
    g = morph((0, 1), (0, 3), [], ["xi1*xi2*xi3"])
    assert compose(g, identity_morphism((0, 3))) == g
    idd = identity_morphism((2, 1))
    assert compose(idd, idd) == idd
    f = P("x1*x2 + xi1", (2, 1))
    assert idd(f) == f


def test_morphism_parity_checks():
    with pytest.raises(ParityMismatch):
        morph((0, 1), (0, 3), [], ["xi1*xi2"])
    with pytest.raises(ParityMismatch):
        morph((1, 0), (1, 1), ["xi1"], [])
    with pytest.raises(SignatureMismatch):
        morph((1, 0), (1, 0), [], [])
    with pytest.raises(SignatureMismatch):
        compose(identity_morphism((1, 0)), identity_morphism((0, 1)))


def test_free_presentation():
    F = FinitePresentation.free((2, 1))
    assert F.sig == Signature(2, 1) and F.relations.generators == ()
    assert F.quotient().dimension is None


def test_coproduct_examples():
    sig, inl, inr = coproduct_free((1, 0), (0, 1))
    assert sig == Signature(1, 1)
    sig, inl, inr = coproduct_free((0, 0), (2, 1))
    assert sig == Signature(2, 1) and inr == identity_morphism((2, 1))
    sig, inl, inr = coproduct_free((2, 1), (1, 2))
    assert sig == Signature(3, 3)
    assert inr.odd_images[0] == SuperPoly.odd_gen(sig, 2)
    u = morph((1, 0), (1, 1), ["x1^2"], [])
    v = morph((0, 1), (1, 1), [], ["x1*xi1"])
    w = cotuple(u, v)
    assert compose(coproduct_free((1, 0), (0, 1))[1], w) == u
    assert compose(coproduct_free((1, 0), (0, 1))[2], w) == v


def test_product_examples():
    QQ = pres((0, 0))
    prod = product_algebra(QQ, QQ)
    assert prod.sig == Signature(2, 0)
    assert prod.quotient().dimension == 2
    A = pres((1, 2), "x1^2", "x1 - xi1*xi2")
    assert product_algebra(A, FinitePresentation.terminal()).quotient().dimension == A.quotient().dimension
    L = pres((0, 1))
    Q = product_algebra(L, L).quotient()
    assert Q.dimension == 4 and odd_dimension(Q) == 2 and even_dimension(Q) == 2


def test_iota_examples():
    A = pres((1, 0))
    assert iota_lower_shriek(A) == A
    B = pres((1, 0), "x1^2")
    assert iota_lower_shriek(B).relations.generators == (P("x1^2", (1, 0)),)
    assert iota_lower_shriek(pres((0, 0))).sig == Signature(0, 0)
    with pytest.raises(OddGeneratorPresent):
        iota_lower_shriek(pres((0, 1)))


def test_reduce_rd_examples():
    r = reduce_rd(pres((1, 2), "x1^2 - xi1*xi2"))
    assert r.sig == Signature(1, 0) and r.relations.generators == (P("x1^2", (1, 0)),)
    assert reduce_rd(FinitePresentation.free((2, 3))) == FinitePresentation.free((2, 0))
    assert reduce_rd(pres((0, 1))).quotient().dimension == 1


def test_reduce_morphism():
    f = morph((1, 1), (1, 2), ["x1^2 + xi1*xi2"], ["x1*xi1"])
    assert reduce_morphism(f) == morph((1, 0), (1, 0), ["x1^2"], [])


def test_product_preservation_examples():
    assert check_product_preservation(pres((0, 1)), pres((0, 2)))
    assert check_product_preservation(pres((0, 0)), pres((0, 0)))
    A = pres((1, 2), "x1^2", "x1 - xi1*xi2")
    assert check_product_preservation(A, pres((0, 0)))
    assert reduce_rd(A).quotient().dimension == 1


def test_product_preservation_needs_finite():
    with pytest.raises(NotFiniteDimensional):
        check_product_preservation(pres((1, 0)), pres((0, 0)))


def test_theory_mismatch():
    a = FinitePresentation.of((0, 0), [], TheoryTag.SMOOTH)
    with pytest.raises(TheoryMismatch):
        product_algebra(a, pres((0, 0)))
    with pytest.raises(TheoryMismatch):
        a.quotient()


def test_presentation_json_roundtrip():
    A = pres((1, 2), "x1^2", "x1 - xi1*xi2")
    assert FinitePresentation.from_json(A.to_json()) == A


def test_structure_table_dual_numbers():
    T = structure_table(pres((1, 0), "x1^2").quotient())
    # basis [1, x]: 1*1 = 1, 1*x = x, x*x = 0
    assert T == [[{0: 1}, {1: 1}], [{1: 1}, {}]]
