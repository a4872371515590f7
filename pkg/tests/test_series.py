"""Truncated series, jets and generalized (log-power) series."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from frobode.scalars import GaussianRational, to_complex
from frobode.series import (
    GeneralizedSeries,
    GSTerm,
    Jet,
    JetValuationError,
    Series,
    gs_differentiate,
    gs_evaluate,
    gs_from_series,
    gs_integrate,
    laurent_ratio,
    poly_eval_jet,
    series_arith,
    series_div,
    series_exp,
    series_inverse,
)

small_ints = st.integers(min_value=-9, max_value=9)
exact_series = st.lists(small_ints, min_size=1, max_size=17).map(
    lambda cs: Series(cs, trunc=16)
)


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------


def test_indexing_and_truncation():
    s = Series([1, 2, 3])
    assert s.trunc == 2
    assert s[1] == GaussianRational(2)
    assert s[99] == GaussianRational(0)
    assert Series([1, 2, 3], trunc=5).coeffs[5] == GaussianRational(0)


def test_strict_arith_requires_equal_trunc():
    with pytest.raises(ValueError):
        series_arith(Series([1]), Series([1, 2]), "add")


@settings(max_examples=60)
@given(exact_series, exact_series, exact_series)
def test_ring_axioms(a, b, c):
    assert (a + b).coeffs == (b + a).coeffs
    assert (a * b).coeffs == (b * a).coeffs
    assert ((a + b) + c).coeffs == (a + (b + c)).coeffs
    assert (a * (b + c)).coeffs == (a * b + a * c).coeffs


@settings(max_examples=60)
@given(exact_series, exact_series)
def test_evaluation_is_a_homomorphism(a, b):
    """Evaluating a truncated product agrees with the product of evaluations
    up to the truncation error bound."""
    x = 0.03
    prod = (a * b).evaluate(x)
    direct = a.evaluate(x) * b.evaluate(x)
    bound = (a.magnitude() + 1) * (b.magnitude() + 1) * 20 * abs(x) ** 17 * 4
    assert abs(prod - direct) <= bound + 1e-12


def test_inverse_and_division():
    a = Series([1, -1, 2, 5], trunc=8)
    assert (a * series_inverse(a)).coeffs[0] == GaussianRational(1)
    assert all(not bool(c) for c in (a * series_inverse(a)).coeffs[1:])
    b = Series([2, 1], trunc=8)
    assert (series_div(a, b) * b).coeffs == a.coeffs


def test_exp_matches_scalar_exponential():
    s = series_exp(Series([0, 1], trunc=10))
    for n in range(11):
        assert to_complex(s[n]) == pytest.approx(1 / math.factorial(n))
    with pytest.raises(ValueError):
        series_exp(Series([1, 1]))


def test_laurent_ratio_cancels_valuations():
    num = Series([0, 0, 0, 2, 4], trunc=8)
    den = Series([0, 1, 1], trunc=8)
    shift, unit = laurent_ratio(num, den)
    assert shift == 2
    assert unit[0] == GaussianRational(2)
    back = unit * den.truncate(unit.trunc)
    want = num.shift(-2).truncate(back.trunc)
    assert back.coeffs == want.coeffs


def test_derivative_drops_trunc():
    s = Series([5, 1, 3, 7], trunc=3)
    d = s.derivative()
    assert d.trunc == 2
    assert d.coeffs == Series([1, 6, 21]).coeffs


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------


@settings(max_examples=60)
@given(st.lists(small_ints, min_size=3, max_size=5), st.lists(small_ints, min_size=3, max_size=5))
def test_jet_div_mul_roundtrip(a, b):
    num, den = Jet(a), Jet(b)
    if den.valuation() is None or num.valuation() is None:
        return
    if num.valuation() < den.valuation():
        return
    q = num.div(den)
    back = q * den
    for t in range(len(q.coeffs)):
        assert to_complex(back.coeff(t)) == pytest.approx(to_complex(num.coeff(t)))


def test_jet_division_valuation_guard():
    with pytest.raises(JetValuationError):
        Jet([1, 1, 1]).div(Jet([0, 1, 1]))


def test_jet_division_shrinks_reliable_order():
    q = Jet([0, 1, 2, 3]).div(Jet([0, 1, 1]))
    assert q.order == 1
    with pytest.raises(IndexError):
        q.coeff(2)


def test_poly_eval_jet_matches_derivatives():
    # p(r) = r^3 - 2r + 1 at r = 2 + eps
    p = [GaussianRational(1), GaussianRational(-2), GaussianRational(0), GaussianRational(1)]
    j = poly_eval_jet(p, GaussianRational(2), 2)
    assert j.coeff(0) == GaussianRational(5)
    assert j.derivative_value(1) == GaussianRational(10)  # 3r^2 - 2
    assert j.derivative_value(2) == GaussianRational(12)  # 6r


# ---------------------------------------------------------------------------
# Generalized series
# ---------------------------------------------------------------------------


def test_normalization_merges_integer_offsets():
    g = GeneralizedSeries(
        [
            GSTerm(GaussianRational(1), 0, Series([1, 0, 0], trunc=4)),
            GSTerm(GaussianRational(2), 0, Series([3, 1], trunc=4)),
        ]
    )
    assert len(g.terms) == 1
    t = g.terms[0]
    assert t.exponent == GaussianRational(1)
    assert t.body[0] == GaussianRational(1)
    assert t.body[1] == GaussianRational(3)


def test_zero_bodies_are_dropped():
    g = gs_from_series(Series([0, 0], trunc=3), GaussianRational(2))
    assert g.is_zero()


def test_differentiate_then_integrate_is_identity():
    g = gs_from_series(Series([1, 2, -1, 4], trunc=6), GaussianRational(1, 1), logpow=1)
    back = gs_integrate(gs_differentiate(g))
    diff = back - g.truncate(back.trunc)
    assert all(t.body.is_zero(scale=10.0) for t in diff.terms)


def test_integrate_log_raises_power_at_minus_one():
    g = gs_from_series(Series([1], trunc=2), GaussianRational(-1))
    out = gs_integrate(g)
    assert out.max_logpow() == 1


def test_evaluation_with_logs():
    half = GaussianRational(Fraction(1, 2))
    g = GeneralizedSeries([GSTerm(half, 1, Series([2], trunc=2))])
    x = 0.3
    want = 2 * x**0.5 * math.log(x)
    assert gs_evaluate(g, x) == pytest.approx(want)


def test_product_adds_exponents_and_logpowers():
    g1 = GeneralizedSeries(
        [GSTerm(GaussianRational(Fraction(1, 2)), 1, Series([1, 1], trunc=4))]
    )
    g2 = GeneralizedSeries(
        [GSTerm(GaussianRational(Fraction(1, 3)), 2, Series([2], trunc=4))]
    )
    p = g1 * g2
    assert p.terms[0].exponent == GaussianRational(Fraction(5, 6))
    assert p.max_logpow() == 3
