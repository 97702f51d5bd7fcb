import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcend.errors import KindMismatch, PreconditionViolation
from transcend.polyseries import AtLeast, Poly, TruncSeries
from transcend.siegel import (AuxiliaryForm, build_auxiliary, check_multiplicity,
                              mahler_step, target_valuation, theta_step)
from transcend.systems import extend_series, system_solution


def random_form(rng, p, n):
    while True:
        coeffs = [Poly([Fraction(rng.randint(-5, 5)) for _ in range(n + 1)]) for _ in range(p)]
        if any(coeffs):
            return AuxiliaryForm(tuple(coeffs), n)


def theta_defect(form, system, Y):
    lhs = theta_step(form, system).evaluate(Y)
    rhs = form.evaluate(Y).derivative() * system.T
    return lhs.truncate(rhs.order) - rhs


def mahler_defect(form, system, Y):
    nxt, d = mahler_step(form, system)
    lhs = nxt.evaluate(Y)
    rhs = form.evaluate(Y).compose_power(system.q).truncate(lhs.order) * (system.T ** d)
    return lhs - rhs


def test_target_valuation():
    assert target_valuation(2, 2) == 4
    assert target_valuation(5, 4, Fraction(1, 2)) == 22


def test_pade_exp(exp_spec):
    g = [TruncSeries.one(8), extend_series(exp_spec.functions[0], 8)]
    form, h = build_auxiliary(g, 2, 5)
    a, b = form.coeffs
    assert {a, b} == {Poly([12, 6, 1]), Poly([-12, 6, -1])}
    assert h == 12
    assert form.valuation(g) == 5


def test_trivial_relation_has_infinite_valuation():
    z = TruncSeries([0, 1], 6)
    form, _ = build_auxiliary([TruncSeries.one(6), z], 1, 3)
    assert form.coeffs == (Poly([0, 1]), Poly([-1]))
    assert isinstance(form.valuation([TruncSeries.one(6), z]), AtLeast)


def test_cos_sin_small_form(cossin):
    Y = system_solution(cossin.linear_system(), cossin.functions, 16)
    form, _ = build_auxiliary(Y, 1, 3)
    assert form.coeffs == (Poly([0, 1]), Poly([-1]))
    assert form.valuation(Y) == 3


def test_preconditions():
    g = [TruncSeries.one(4), TruncSeries([1, 1, 0, 0], 4)]
    with pytest.raises(PreconditionViolation):
        build_auxiliary(g, 1, 4)
    with pytest.raises(PreconditionViolation):
        build_auxiliary(g, 5, 6)


def test_theta_example():
    from transcend.systems import LinearSystemSpec
    S = LinearSystemSpec("differential", [[1]])
    out = theta_step(AuxiliaryForm((Poly([0, 1]),), 1), S)
    assert out.coeffs == (Poly([1, 1]),)


def test_step_kind_checks(cossin, fredholm):
    form = AuxiliaryForm((Poly([1]), Poly([1])), 0)
    with pytest.raises(KindMismatch):
        mahler_step(form, cossin.linear_system())
    with pytest.raises(KindMismatch):
        theta_step(form, fredholm.linear_system())


@pytest.mark.parametrize("name", ["exp", "cossin"])
@given(seed=st.integers(0, 10 ** 6))
def test_theta_identity(shipped, name, seed):
    spec = shipped[name]
    S = spec.linear_system()
    Y = system_solution(S, spec.functions, 24)
    form = random_form(random.Random(seed), S.size, 3)
    assert theta_defect(form, S, Y).is_zero()


@pytest.mark.parametrize("name", ["fredholm", "thue_morse"])
@given(seed=st.integers(0, 10 ** 6))
def test_mahler_identity(shipped, name, seed):
    spec = shipped[name]
    S = spec.linear_system()
    Y = system_solution(S, spec.functions, 48)
    form = random_form(random.Random(seed), S.size, 3)
    assert mahler_defect(form, S, Y).is_zero()


def test_thue_morse_needs_clearing(thue_morse):
    S = thue_morse.linear_system()
    _, d = mahler_step(AuxiliaryForm((Poly([1]),), 0), S)
    assert d == 1


def test_valuation_grows_under_mahler(thue_morse):
    S = thue_morse.linear_system()
    Y = system_solution(S, thue_morse.functions, 64)
    form = AuxiliaryForm((Poly([0, 0, 0, 1]),), 3)
    v0 = form.valuation(Y)
    nxt, _ = mahler_step(form, S)
    assert nxt.valuation(Y) == 2 * v0


def test_multiplicity_reproducible(cossin):
    a = check_multiplicity(cossin.functions, 1, 20, 2, 2, seed=3)
    b = check_multiplicity(cossin.functions, 1, 20, 2, 2, seed=3)
    assert a == b
    assert all(isinstance(v, int) for v in a.valuations)
    assert sum(a.histogram.values()) == 20


def test_multiplicity_uses_seed(cossin):
    a = check_multiplicity(cossin.functions, 1, 20, 3, 3, seed=1, order=64)
    b = check_multiplicity(cossin.functions, 1, 20, 3, 3, seed=2, order=64)
    assert a.seed != b.seed


def test_multiplicity_monomial_series_input(fredholm):
    s = extend_series(fredholm.functions[0], 128)
    r = check_multiplicity(fredholm.functions, 1, 10, 1, 2, order=128, series=[s])
    assert r.max_ratio >= 0
