from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcend.errors import UsageError
from transcend.polyseries import (AtLeast, MonomialBasis, MultiPoly, Poly, RatFunc,
                                  TruncSeries, basis_size, monomial_series, order_key)

coeff = st.integers(-9, 9).map(Fraction)
polys = st.lists(coeff, max_size=6).map(Poly)
series = st.lists(coeff, min_size=1, max_size=12)


def test_poly_basics():
    p = Poly([1, 2, 0, 0])
    assert p.degree == 1 and Poly().degree == -1
    assert p(3) == 7
    assert (Poly.z() ** 3).compose_power(2) == Poly.monomial(1, 6)
    assert Poly([0, 0, 5]).valuation == 2


@given(polys, polys)
def test_divmod_reconstructs(a, b):
    if not b:
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, polys)
def test_gcd_divides_both(a, b):
    g = a.gcd(b)
    if g:
        assert g.divides(a) and g.divides(b)


def test_normalized_is_primitive_positive():
    p = Poly([Fraction(-1, 2), Fraction(3, 4)]).normalized()
    assert list(p.coefficients()) == [2, -3]


def test_ratfunc_reduces_and_rejects_poles():
    r = RatFunc(Poly([-1, 0, 1]), Poly([-1, 1]))
    assert r.is_polynomial and r.num == Poly([1, 1])
    s = RatFunc(Poly([1]), Poly([Fraction(-1, 2), 1]))
    with pytest.raises(ZeroDivisionError):
        s(Fraction(1, 2))
    assert s(Fraction(1, 4)) == -4


@given(series, series)
def test_series_product_commutes_and_keeps_order(a, b):
    s, t = TruncSeries(a, len(a)), TruncSeries(b, len(b))
    assert (s * t).order == min(s.order, t.order)
    assert list((s * t).coeffs) == list((t * s).coeffs)


@given(series)
def test_derivative_drops_one_order(a):
    s = TruncSeries(a, len(a))
    d = s.derivative()
    assert d.order == s.order - 1
    assert all(d[k] == (k + 1) * a[k + 1] for k in range(d.order))


@given(series, st.integers(2, 4))
def test_compose_power_scales_order(a, q):
    s = TruncSeries(a, len(a)).compose_power(q)
    assert s.order == q * len(a)
    assert all(s[q * k] == a[k] for k in range(len(a)))


def test_truncate_cannot_extend():
    with pytest.raises(UsageError):
        TruncSeries([1, 2], 2).truncate(5)


def test_valuation_sentinel():
    v = TruncSeries([0, 0, 0], 3).valuation()
    assert isinstance(v, AtLeast) and v.order == 3


def test_monomial_basis_order():
    b = MonomialBasis(2, 2)
    assert b.exponents == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert b.p == basis_size(2, 2) == 6
    with pytest.raises(UsageError):
        b.index((3, 0))


@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_psi_round_trip(m, D, data):
    b = MonomialBasis(m, D)
    vec = data.draw(st.lists(coeff, min_size=b.p, max_size=b.p))
    assert b.vector(b.poly(vec)) == vec


@pytest.mark.parametrize("m,D,p", [(1, 3, 4), (2, 2, 6), (2, 4, 15), (3, 2, 10)])
def test_basis_size_binomial(m, D, p):
    assert basis_size(m, D) == p


def test_monomial_series_products():
    x = TruncSeries([1, 1, Fraction(1, 2), Fraction(1, 6)], 4)
    b = MonomialBasis(1, 2)
    g = monomial_series(b, [x])
    assert list(g[2].coeffs) == list((x * x).coeffs)


@pytest.mark.parametrize("order,first", [("lex", (2, 0)), ("grlex", (0, 3)), ("grevlex", (0, 3))])
def test_leading_term_orders(order, first):
    P = MultiPoly({(2, 0): 1, (0, 3): 1, (1, 1): 1}, 2)
    assert P.leading(order)[0] == first


def test_grevlex_vs_grlex_tiebreak():
    mus = [(1, 0, 2), (0, 2, 1)]
    assert max(mus, key=order_key("grlex")) == (1, 0, 2)
    assert max(mus, key=order_key("grevlex")) == (0, 2, 1)


def test_multipoly_arithmetic_and_specialize():
    x1, x2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    pyth = x1 ** 2 + x2 ** 2 - 1
    assert pyth.total_degree == 2
    Q = MultiPoly({(1, 0): Poly([0, 1]), (0, 1): Poly([-1])}, 2)
    assert Q.specialize_z(Fraction(1, 2)).normalized() == x1 - 2 * x2
