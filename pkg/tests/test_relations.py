from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from transcend.errors import PInIdeal, TruncationTooSmall, UsageError
from transcend.polyseries import MonomialBasis, MultiPoly, Poly
from transcend.relations import (buchberger, evaluate_relation, hilbert_differences,
                                 is_groebner, ledger, linear_forms_from_relations, reduce,
                                 relation_kernel, s_polynomial, specialize)
from transcend.systems import extend_series

X1, X2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
PYTH = X1 ** 2 + X2 ** 2 - 1


def test_cos_sin_pythagorean_kernel(cossin):
    rel = relation_kernel(cossin.functions, 2, 0, 12)
    assert len(rel.generators) == 1
    assert rel.generators[0].specialize_z(0) == PYTH


def test_exp_has_no_small_relation(exp_spec):
    rel = relation_kernel(exp_spec.functions, 2, 2, 20)
    assert rel.generators == ()


def test_fredholm_square_relation(fredholm):
    F = extend_series(fredholm.functions[0], 40)
    rel = relation_kernel([F, F * F], 2, 0, 40)
    assert len(rel.generators) == 1
    assert rel.generators[0].specialize_z(0) == (X2 - X1 ** 2).normalized()


def test_kernel_generators_vanish(cossin):
    rel = relation_kernel(cossin.functions, 3, 1, 64)
    series = [extend_series(f, 64) for f in cossin.functions]
    assert all(evaluate_relation(Q, series).is_zero() for Q in rel.generators)


def test_truncation_too_small(cossin):
    with pytest.raises(TruncationTooSmall):
        relation_kernel(cossin.functions, 2, 0, 6)


def test_certified_flag(cossin):
    assert not relation_kernel(cossin.functions, 2, 0, 12).certified
    assert relation_kernel(cossin.functions, 2, 0, 64).certified


def test_kernel_dimension_stable_in_truncation(cossin):
    dims = {len(relation_kernel(cossin.functions, 2, 1, T).generators) for T in (40, 64, 96)}
    assert len(dims) == 1


def test_specialize_examples():
    z1 = MultiPoly({(1, 0): Poly([-1, 1])}, 2)
    assert specialize([z1], 1) == []
    Q = MultiPoly({(1, 0): Poly([0, 1]), (0, 1): Poly([-1])}, 2)
    assert specialize([Q], Fraction(1, 2)) == [X1 - 2 * X2]
    assert specialize([PYTH], Fraction(3, 7)) == [PYTH]


SHIPPED_IDEALS = {
    "pythagorean": ([PYTH], "grlex"),
    "lex": ([X1 - X2, X2 ** 2 - 1], "lex"),
    "monomial": ([X1 ** 2, X1 * X2], "grlex"),
}


@pytest.mark.parametrize("name", SHIPPED_IDEALS)
def test_buchberger_examples_are_fixed_points(name):
    gens, order = SHIPPED_IDEALS[name]
    G = buchberger(gens, order)
    assert {repr(g) for g in G} == {repr(g) for g in gens}
    assert is_groebner(G, order)


def _to_sympy(P, syms):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** e for s, e in zip(syms, mu)])
               for mu, c in P.terms.items())


small_poly = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.integers(-3, 3).filter(bool).map(Fraction), min_size=1, max_size=4,
).map(lambda t: MultiPoly(t, 2))


@given(st.lists(small_poly, min_size=1, max_size=3), st.sampled_from(["lex", "grlex", "grevlex"]))
def test_buchberger_matches_sympy(gens, order):
    G = buchberger(gens, order)
    assert is_groebner(G, order)
    assert all(not reduce(g, G, order) for g in gens)
    x, y = sympy.symbols("x y")
    ref = sympy.groebner([_to_sympy(g, (x, y)) for g in gens], x, y, order=order)
    ours = {sympy.expand(_to_sympy(g, (x, y))) for g in G}
    monic = [sympy.expand(e / sympy.Poly(e, x, y).LC(order=order)) for e in ref.exprs]
    assert set(monic) == ours


def test_s_polynomial_cancels_leads():
    S = s_polynomial(X1 ** 2, X1 * X2)
    assert not S


def test_linear_forms_examples():
    _, r2 = linear_forms_from_relations([PYTH], MonomialBasis(2, 2))
    forms, r3 = linear_forms_from_relations([PYTH], MonomialBasis(2, 3))
    assert r2 == 1 and len(forms) == 3 and r3 == 3
    assert linear_forms_from_relations([], MonomialBasis(2, 2)) == ([], 0)
    with pytest.raises(UsageError):
        linear_forms_from_relations([X1 ** 3], MonomialBasis(2, 2))


def test_ledger_cossin(cossin):
    L = ledger(cossin.functions, X1, 1, 2, cossin.value_relations)
    assert (L.p, L.q, L.r, L.s, L.u, L.v, L.w) == (6, 1, 1, 4, 3, 2, 5)
    assert L.vh_below_w
    L4 = ledger(cossin.functions, X1, 2, 2, cossin.value_relations)
    assert (L4.p, L4.q, L4.w) == (15, 6, 9)


def test_ledger_exp(exp_spec):
    L = ledger(exp_spec.functions, MultiPoly.variable(0, 1), 1, 3)
    assert (L.p, L.q, L.r, L.s, L.u, L.v, L.w) == (4, 0, 0, 3, 3, 1, 4)


def test_ledger_p_in_ideal(cossin):
    with pytest.raises(PInIdeal):
        ledger(cossin.functions, PYTH, 1, 2, cossin.value_relations)


def test_ledger_default_value_relations_match_supplied(cossin):
    a = ledger(cossin.functions, X1, 1, 3, cossin.value_relations)
    b = ledger(cossin.functions, X1, 1, 3, None, alpha=1)
    assert a.to_json() == b.to_json()


def test_hilbert_serre_cossin(cossin):
    ws = [ledger(cossin.functions, X1, 1, k, cossin.value_relations).w for k in range(2, 8)]
    assert hilbert_differences(ws, 2) == [0] * 4
    assert ws[0] == 5 and hilbert_differences(ws, 1)[0] == 2
