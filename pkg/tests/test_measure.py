from fractions import Fraction

import pytest
from flint import acb, arb, ctx
from hypothesis import given
from hypothesis import strategies as st

from transcend.errors import SingularPoint, TailBoundUnavailable, UsageError
from transcend.measure import (CERTIFIED_ZERO, NONZERO, UNDETERMINED, ValueVector, classify,
                               estimate_wd, eval_at, liouville_scan, poly_value, reference_c2)
from transcend.polyseries import MultiPoly
from transcend.systems import FunctionSpec

X = MultiPoly.variable(0, 1)
FREDHOLM_HALF = "0.816421509021893"


def test_exp_at_one(exp_spec):
    b = eval_at(exp_spec.functions[0], 1, 64)
    with ctx.workprec(128):
        assert b.acb.overlaps(acb(arb.const_e()))
    assert abs(b.midpoint.real - 2.718281828459045) < 1e-15
    assert b.radius < Fraction(1, 2 ** 60)


def test_fredholm_at_half(fredholm):
    b = eval_at(fredholm.functions[0], Fraction(1, 2), 128)
    assert f"{b.midpoint.real:.15f}" == FREDHOLM_HALF
    # partial sum through 2^-64 brackets the value within 2^-127
    s6 = sum(Fraction(1, 2 ** (2 ** n)) for n in range(7))
    assert s6 < b.abs_upper() and b.abs_lower() < s6 + Fraction(1, 2 ** 127)


def test_fredholm_pullback_outside_disc(fredholm):
    inside = eval_at(fredholm.functions[0], Fraction(9, 10), 96)
    assert inside.radius < Fraction(1, 2 ** 80)
    total = sum(Fraction(9, 10) ** (2 ** n) for n in range(12))
    assert inside.overlaps(eval_at(fredholm.functions[0], Fraction(9, 10), 192))
    assert abs(inside.midpoint.real - float(total)) < 1e-3


def test_value_at_zero_is_exact(exp_spec, thue_morse):
    for f in (exp_spec.functions[0], thue_morse.functions[0]):
        b = eval_at(f, 0, 64)
        assert b.is_exact() and b.contains(1)


def test_missing_growth_bound():
    f = FunctionSpec("differential", [[-1], [1]], [1])
    with pytest.raises(TailBoundUnavailable):
        eval_at(f, 1, 64)
    assert eval_at(f, 1, 64, mode="heuristic").overlaps(eval_at(
        FunctionSpec("differential", [[-1], [1]], [1], growth={"C": 1}), 1, 64))


def test_singular_pullback(thue_morse):
    with pytest.raises((SingularPoint, UsageError)):
        eval_at(thue_morse.functions[0], 1, 64)


def test_poly_value_examples(cossin, exp_spec):
    w = ValueVector.from_functions(cossin.functions, 1, 128)
    assert poly_value(cossin.value_relations[0], w).contains_zero()
    e = ValueVector.from_functions(exp_spec.functions, 1, 128)
    assert poly_value(X, e).abs_lower() > 2
    assert poly_value(MultiPoly({}, 1), e).is_exact()


def test_classify_statuses(cossin):
    w = ValueVector.from_functions(cossin.functions, 1, 64)
    rel = cossin.value_relations
    assert classify(rel[0], w, max_precision=128).status == UNDETERMINED
    assert classify(rel[0], w, relations=rel).status == CERTIFIED_ZERO
    assert classify(MultiPoly.variable(0, 2), w).status == NONZERO


def test_rational_third_scan():
    w = ValueVector.from_exact([Fraction(1, 3)], 128)
    rep = liouville_scan(w, 1, 100)
    assert rep.C1 is not None and abs(float(rep.C1.mid()) - 1 / 3) < 1e-12
    assert {tuple(r.coeffs) for r in rep.zero_records} == {(k, -3 * k) for k in range(1, 34)}
    assert all(r.status == CERTIFIED_ZERO for r in rep.zero_records)


def test_exact_half_reports_vanishing():
    w = ValueVector.from_exact([Fraction(1, 2)], 64)
    est = estimate_wd(w, 1, [4, 16])
    assert (1, -2) in {tuple(r.coeffs) for r in est.zero_records}


def test_exp_quadratic_scan(exp_spec):
    w = ValueVector.from_functions(exp_spec.functions, 1, 128)
    rep = liouville_scan(w, 2, 50)
    assert rep.zero_records == []
    assert rep.C2 is not None


def test_fitted_bound_holds_on_every_record(fredholm):
    w = ValueVector.from_functions(fredholm.functions, Fraction(1, 2), 128)
    rep = liouville_scan(w, 1, 300)
    with ctx.workprec(128):
        for r in rep.records:
            if r.height >= 2:
                bound = rep.C1 * (-(arb(r.height).log() * rep.C2 * r.degree)).exp()
                assert r.ball.acb.abs_lower() >= bound.lower()


def test_scan_counts_and_strategy_checks(fredholm):
    w = ValueVector.from_functions(fredholm.functions, Fraction(1, 2), 128)
    rep = liouville_scan(w, 1, 10)
    assert rep.total_records == (21 ** 2 - 1) // 2
    with pytest.raises(UsageError):
        liouville_scan(w, 0, 10)
    with pytest.raises(UsageError):
        liouville_scan(w, 1, 10, strategy="random")


def test_lattice_finds_planted_relation():
    w = ValueVector.from_exact([Fraction(7, 11)], 128)
    rep = liouville_scan(w, 1, 10 ** 6, strategy="lattice")
    assert (7, -11) in {tuple(r.coeffs) for r in rep.zero_records}


def test_scan_is_deterministic(fredholm):
    w = ValueVector.from_functions(fredholm.functions, Fraction(1, 2), 128)
    a = liouville_scan(w, 1, 200).to_json()
    b = liouville_scan(w, 1, 200).to_json()
    assert a == b


def test_wd_monotone(fredholm):
    w = ValueVector.from_functions(fredholm.functions, Fraction(1, 2), 128)
    est = estimate_wd(w, 1, [16, 64, 256])
    vals = [float(x.mid()) for x in est.best]
    assert vals == sorted(vals) and all(v < 10 for v in vals)


def test_wd_rational_normalized_decays():
    w = ValueVector.from_exact([Fraction(1, 3)], 64)
    est = estimate_wd(w, 1, [16, 256, 4096])
    norm = [float(x.mid()) for x in est.normalized]
    assert norm == sorted(norm, reverse=True) and norm[-1] < 0.2


@pytest.mark.parametrize("m,h,value", [(1, 1, 4), (4, 1, 512), (9, 2, 3 * 4 ** 9 * 2 ** 10)])
def test_reference_c2_exact(m, h, value):
    assert reference_c2(m, h) == value


def test_reference_c2_ball():
    b = reference_c2(2, 2)
    assert abs(b.midpoint.real - 181.01933598375618) < 1e-10


@given(st.integers(1, 40), st.integers(-40, 40), st.integers(2, 9))
def test_scale_coherence(a, b, c):
    # exponent e = -log|P| / log H; e(cP) >= e(P) exactly when |P| >= H(P)
    w = ValueVector.from_exact([Fraction(1, 7)], 128)
    P = a * X + b
    if not P.evaluate(w.exact, Fraction(1)) or max(abs(a), abs(b)) < 2:
        return
    r1, r2 = classify(P, w), classify(P * c, w)
    assert r2.height == c * r1.height
    assert (r1.ball * c).overlaps(r2.ball)
    e1, e2 = r1.exponent_bounds(1, 128), r2.exponent_bounds(1, 128)
    value = abs(Fraction(a, 7) + b)
    if value >= r1.height:
        assert e2[1] >= e1[0]
    else:
        assert e2[0] <= e1[1]
