import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superfermat import (AlgebraMismatch, DomainError, NotWeilAlgebra, ParityMismatch,
                         RealWeilAlgebra, Signature, SuperFunction, SuperMonomial, berezin_eval, smooth_eval_jet, substitute, taylor_multi_index_table)
from superfermat import weil
from superfermat.weil import Call, Const, Product, Var, diff, eval_exact, eval_numeric, to_text
from superfermat.parser import parse_smooth, parse_superpoly

from oracles import central_difference, rel_close


def P(src, sig):
    return parse_superpoly(src, sig)


def S(src, arity=3):
    return parse_smooth(src, arity)


def dual():
    return RealWeilAlgebra.from_relations((1, 0), [P("x1^2", (1, 0))])


# ---------------------------------------------------------------- expressions

def test_diff_examples():
    u, v = Var(1), Var(2)
    assert diff(S("u1^2"), 1) == S("2*u1")
    assert diff(S("exp(u1)"), 1) == S("exp(u1)")
    assert diff(S("sin(u1*u2)"), 1) == Product(Call("cos", Product(u, v)), v)
    assert diff(S("u2 + 5"), 1) == Const(0)


def test_eval_examples():
    assert eval_numeric(S("exp(u1)"), [0.0]) == 1.0
    with pytest.raises(DomainError):
        eval_numeric(S("log(u1)"), [-1.0])
    assert abs(eval_numeric(S("sin(u1)"), [math.pi / 2]) - 1.0) <= 1e-15
    with pytest.raises(DomainError):
        eval_numeric(S("1/u1"), [0.0])
    with pytest.raises(DomainError):
        eval_numeric(S("exp(u1)"), [1e6])
    assert eval_exact(S("1/(1+u1) + u1^2"), [Fraction(1, 2)]) == Fraction(2, 3) + Fraction(1, 4)


def test_domain_error_points_at_subexpression():
    src = "u1 + log(u1 - 2)"
    e = parse_smooth(src, 1)
    with pytest.raises(DomainError) as err:
        eval_numeric(e, [1.0])
    start, end = err.value.span
    assert src[start:end] == "log(u1 - 2)"


def test_taylor_table_examples():
    assert taylor_multi_index_table(S("u1^2", 1), [3.0], 2) == {(0,): 9.0, (1,): 6.0, (2,): 2.0}
    t = taylor_multi_index_table(S("u1*u2", 2), [1.5, -2.0], 2)
    assert t[(1, 1)] == 1.0 and t[(2, 0)] == 0.0 and t[(0, 2)] == 0.0
    for k in range(5):
        table = taylor_multi_index_table(S("exp(u1)", 1), [0.7], k)
        assert all(rel_close(v, math.exp(0.7), 1e-15) for v in table.values())


def test_to_text_roundtrip_example():
    e = S("-(u1^2) + 3/2*u1 - 2 + cos(1/(u2 + 1))", 2)
    assert parse_smooth(to_text(e), 2) == e


# ---------------------------------------------------------------- Weil algebras

def test_weil_algebra_checks():
    with pytest.raises(NotWeilAlgebra):
        RealWeilAlgebra.from_relations((1, 0), [P("x1^2 - 1", (1, 0))])
    W = dual()
    assert W.dimension == 2 and W.nil_index == 2
    L = RealWeilAlgebra.from_relations((0, 3))
    assert L.dimension == 8 and L.nil_index == 4


def test_exp_on_dual_numbers():
    W = dual()
    for a in (-1.3, 0.0, 0.5, 2.25):
        arg = W.element(P(f"{Fraction(a)} + x1", (1, 0)))
        jet = smooth_eval_jet(S("exp(u1)", 1), [arg])
        c = jet.coefficients
        assert rel_close(jet.body, math.exp(a), 1e-15)
        deriv = c[SuperMonomial((1,), ())]
        assert rel_close(deriv, central_difference(math.exp, a), 1e-6)


def test_polynomial_agrees_with_quotient_mul():
    W = RealWeilAlgebra.from_relations((2, 0), [P("x1^2", (2, 0)), P("x2^3", (2, 0)), P("x1*x2^2", (2, 0))])
    f = W.element(P("1/2 + x1 - x2", (2, 0)))
    g = W.element(P("-3 + x2^2 + x1*x2", (2, 0)))
    jet = smooth_eval_jet(S("u1*u2", 2), [f, g])
    assert jet.exact
    assert jet.value == W.quotient.mul(f.value, g.value)


def test_recip_on_even_part_of_lambda2():
    # (Lambda^2)_0 is spanned by 1 and z = xi1*xi2, z^2 = 0
    W = RealWeilAlgebra.from_relations((1, 0), [P("x1^2", (1, 0))])
    z = W.element(P("x1", (1, 0)))
    jet = smooth_eval_jet(S("1/(1+u1)", 1), [z])
    assert jet.value == P("1 - x1", (1, 0))
    L = RealWeilAlgebra.from_relations((0, 2))
    jet = smooth_eval_jet(S("1/(1+u1)", 1), [L.element(P("xi1*xi2", (0, 2)))])
    assert jet.value == P("1 - xi1*xi2", (0, 2))


def test_truncation_stability():
    W = RealWeilAlgebra.from_relations((1, 0), [P("x1^4", (1, 0))])
    a = W.element(P("1/3 + x1 - 2*x1^2", (1, 0)))
    e = S("sin(u1)*exp(u1) + 1/(2 + u1)", 1)
    base = smooth_eval_jet(e, [a])
    for extra in (1, 2, 5):
        assert smooth_eval_jet(e, [a], order=W.nil_index - 1 + extra) == base


def test_jet_argument_checks():
    W = RealWeilAlgebra.from_relations((0, 2))
    with pytest.raises(ParityMismatch):
        smooth_eval_jet(S("exp(u1)", 1), [W.element(P("xi1", (0, 2)))])
    with pytest.raises(AlgebraMismatch):
        smooth_eval_jet(S("u1 + u2", 2), [W.constant(1), dual().constant(1)])
    with pytest.raises(DomainError):
        smooth_eval_jet(S("log(u1)", 1), [dual().element(P("x1", (1, 0)))])


def test_jet_formatting():
    W = dual()
    jet = smooth_eval_jet(S("exp(u1)", 1), [W.element(P("x1", (1, 0)))])
    assert jet.format(( ["t"], [])) == "1 + 1*t"
    data = jet.to_json()
    assert data["coeffs"] == [{"basis": {"even": [0], "odd": []}, "value": 1.0},
                              {"basis": {"even": [1], "odd": []}, "value": 1.0}]


def test_berezin_examples():
    L3 = RealWeilAlgebra.from_relations((0, 3))
    gamma = L3.element(P("xi2 + 2*xi3", (0, 3)))
    F = SuperFunction.from_superpoly(P("xi1", (0, 1)))
    assert berezin_eval(F, [], [gamma]) == gamma

    g1 = L3.element(P("xi1 + xi3", (0, 3)))
    g2 = L3.element(P("xi2", (0, 3)))
    a = Fraction(3, 4)
    F = SuperFunction(Signature(1, 2), {(1, 2): S("exp(u1)", 1)})
    out = berezin_eval(F, [L3.constant(a)], [g1, g2])
    expected = (g1 * g2).value
    for key, c in out.value.terms.items():
        assert rel_close(float(c), math.exp(float(a)) * float(expected.terms[key]), 1e-15)
    assert set(out.value.terms) == set(expected.terms)

    W = dual()
    arg = W.element(P("1/2 + x1", (1, 0)))
    e = S("cos(u1) + u1^3", 1)
    F = SuperFunction(Signature(1, 0), {(): e})
    assert berezin_eval(F, [arg], []) == smooth_eval_jet(e, [arg])


def test_berezin_swap_invariance():
    L = RealWeilAlgebra.from_relations((1, 3), [P("x1^2", (1, 3))])
    g = [L.element(P(s, (1, 3))) for s in ("xi1 + x1*xi2", "xi3 - xi2", "2*xi1 + xi3")]
    body = L.element(P("1/3 + x1", (1, 3)))
    e = S("exp(u1)", 1)
    F = SuperFunction(Signature(1, 3), {(1, 3): e})
    Fs = SuperFunction(Signature(1, 3), {(1, 3): weil.s_neg(e)})  # xi3*xi1 = -xi1*xi3
    lhs = berezin_eval(F, [body], g)
    rhs = berezin_eval(Fs, [body], [g[2], g[1], g[0]])
    assert lhs == rhs


def test_berezin_parity_checks():
    L = RealWeilAlgebra.from_relations((0, 2))
    F = SuperFunction.from_superpoly(P("xi1", (0, 1)))
    with pytest.raises(ParityMismatch):
        berezin_eval(F, [], [L.element(P("1 + xi1", (0, 2)))])


# ---------------------------------------------------------------- properties

ANALYTIC = ["exp(u1)", "sin(u1)*u1", "cos(2*u1) + u1^3", "1/(2 + u1)", "log(3 + u1)*exp(u1)",
            "exp(sin(u1))", "u1^2/(1 + u1^2)"]


@settings(max_examples=50)
@given(st.sampled_from(ANALYTIC), st.sampled_from(ANALYTIC),
       st.fractions(min_value=-1, max_value=1, max_denominator=8),
       st.fractions(min_value=-2, max_value=2, max_denominator=4))
def test_homomorphism_up_to_rounding(e1, e2, a, b):
    W = RealWeilAlgebra.from_relations((1, 0), [P("x1^3", (1, 0))])
    x = W.element(P(f"{a} + {b}*x1 + x1^2", (1, 0)))
    f1, f2 = S(e1, 1), S(e2, 1)
    prod = smooth_eval_jet(weil.s_mul(f1, f2), [x])
    summ = smooth_eval_jet(weil.s_add(f1, f2), [x])
    j1, j2 = smooth_eval_jet(f1, [x]), smooth_eval_jet(f2, [x])
    for key in set(prod.value.terms) | set((j1 * j2).value.terms):
        assert rel_close(float(prod.value.terms.get(key, 0)), float((j1 * j2).value.terms.get(key, 0)), 1e-9, 1e-12)
    for key in set(summ.value.terms) | set((j1 + j2).value.terms):
        assert rel_close(float(summ.value.terms.get(key, 0)), float((j1 + j2).value.terms.get(key, 0)), 1e-9, 1e-12)


@settings(max_examples=50)
@given(st.sampled_from(ANALYTIC), st.sampled_from(["sin(u1)", "u1^2 - 1/2", "exp(u1) - 1", "u1/(3 + u1)"]),
       st.fractions(min_value=-1, max_value=1, max_denominator=8))
def test_chain_rule_coherence(outer, inner, a):
    W = RealWeilAlgebra.from_relations((1, 0), [P("x1^4", (1, 0))])
    x = W.element(P(f"{a} + x1 - x1^3", (1, 0)))
    g, f = S(inner, 1), S(outer, 1)
    composite = parse_smooth(to_text(f).replace("u1", "(" + to_text(g) + ")"), 1)
    try:
        one_step = smooth_eval_jet(composite, [x])
        two_step = smooth_eval_jet(f, [smooth_eval_jet(g, [x])])
    except DomainError:
        return
    for key in set(one_step.value.terms) | set(two_step.value.terms):
        assert rel_close(float(one_step.value.terms.get(key, 0)), float(two_step.value.terms.get(key, 0)),
                         1e-9, 1e-12)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_polynomial_consistency(seed):
    rng = random.Random(seed)
    sig = Signature(1, 2)
    W = RealWeilAlgebra.from_relations(sig, [P("x1^3", sig)])
    f = P(" + ".join(f"{rng.randint(-4, 4)}*x1^{k}" for k in range(4)), (1, 0))
    arg = W.element(P(f"{Fraction(rng.randint(-5, 5), 3)} + x1 + xi1*xi2", sig))
    jet = smooth_eval_jet(weil.expr_from_poly(f), [arg])
    assert jet.exact
    assert jet.value == W.quotient.nf(substitute(f, [arg.value], []))
