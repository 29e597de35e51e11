import pytest
from hypothesis import given
from hypothesis import strategies as st

from repconst.polyseries import (
    IntPolynomial,
    TruncatedSeries,
    TruncationError,
    poly_divexact,
    poly_mul,
    series_mul,
    series_substitute_power,
)

P = IntPolynomial

polys = st.lists(st.integers(-20, 20), max_size=8).map(lambda c: IntPolynomial(tuple(c)))
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def test_canonical_form_strips_trailing_zeros():
    assert P((1, 2, 0, 0)).coeffs == (1, 2)
    assert P((0, 0)).coeffs == ()
    assert P(()).degree == -1


def test_mul_difference_of_squares():
    assert poly_mul(P((-1, 1)), P((1, 1))) == P((-1, 0, 1))


def test_mul_identity():
    p = P((3, 0, -2, 7))
    assert poly_mul(p, P((1,))) == p


def test_mul_telescoping():
    assert poly_mul(P((1, 1, 1)), P((-1, 1))) == P((-1, 0, 0, 1))


def test_divexact_examples():
    q, exact = poly_divexact(P((-1, 0, 0, 1)), P((-1, 1)))
    assert exact and q == P((1, 1, 1))
    # z^2 + 1 at z = -1 is 2, so z + 1 cannot divide it
    _, exact = poly_divexact(P((1, 0, 1)), P((1, 1)))
    assert not exact
    p = P((5, -3, 2))
    assert poly_divexact(p, P((1,))) == (p, True)


def test_divexact_non_monic_divisor():
    assert poly_divexact(P((2, 4)), P((1, 2))) == (P((2,)), True)
    assert poly_divexact(P((1, 1)), P((1, 2)))[1] is False


def test_divexact_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divexact(P((1,)), P(()))


@given(polys, polys)
def test_mul_commutes(a, b):
    assert poly_mul(a, b) == poly_mul(b, a)


@given(polys, polys, polys)
def test_mul_associates(a, b, c):
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))


@given(nonzero_polys, nonzero_polys)
def test_degree_is_additive(a, b):
    assert poly_mul(a, b).degree == a.degree + b.degree


@given(polys, nonzero_polys)
def test_divexact_recovers_factor(a, b):
    assert poly_divexact(poly_mul(a, b), b) == (a, True)


def test_json_roundtrip_uses_decimal_strings():
    p = P((10**30, -1, 0, 7))
    text = p.to_json()
    assert text == '["1000000000000000000000000000000", "-1", "0", "7"]'
    assert P.from_json(text) == p
    assert P.from_json("[1, -1, 1]") == P((1, -1, 1))


def S(coeffs, order):
    return TruncatedSeries(tuple(coeffs), order)


def test_series_mul_examples():
    assert series_mul(S((1, 1, 0, 0), 3), S((1, 1, 0, 0), 3)) == S((1, 2, 1, 0), 3)
    a = S((1, 3, 0, 2, 5), 4)
    assert series_mul(a, S((1, 0, 0), 2)) == a.truncate(2)
    one_minus_z = TruncatedSeries.from_poly(P((1, -1)), 3)
    assert series_mul(S((1, 1, 1, 1), 3), one_minus_z) == S((1, 0, 0, 0), 3)


def test_series_order_is_minimum():
    assert series_mul(S((1, 1), 1), S((1, 1, 1, 1), 3)).order == 1


def test_series_length_must_match_order():
    with pytest.raises(ValueError):
        S((1, 2), 3)


def test_reading_past_truncation_is_an_error():
    a = S((1, 1, 0), 2)
    assert a.coeff(2) == 0
    with pytest.raises(TruncationError):
        a.coeff(3)
    with pytest.raises(TruncationError):
        a.truncate(5)


def test_substitute_power_examples():
    assert series_substitute_power(S((1, 1, 0, 0, 0), 4), 2) == S((1, 0, 1, 0, 0), 4)
    a = S((4, 0, 2, 1), 3)
    assert series_substitute_power(a, 1) == a
    assert series_substitute_power(S((1, 1, 1, 0, 0, 0, 0), 6), 3) == S((1, 0, 0, 1, 0, 0, 1), 6)


@given(polys, polys, st.integers(0, 12))
def test_series_mul_matches_poly_mul(a, b, order):
    got = series_mul(TruncatedSeries.from_poly(a, order), TruncatedSeries.from_poly(b, order))
    assert got == TruncatedSeries.from_poly(poly_mul(a, b), order)


@given(st.lists(st.integers(0, 9), min_size=1, max_size=15), st.integers(1, 5))
def test_substitution_preserves_coefficient_sum(coeffs, k):
    a = TruncatedSeries(tuple(coeffs), len(coeffs) - 1)
    top = a.order // k
    assert series_substitute_power(a, k).coefficient_sum(top * k) == a.coefficient_sum(top)


def test_indicator_is_nonnegative():
    f = TruncatedSeries.indicator([0, 2, 9], 5)
    assert f.coeffs == (1, 0, 1, 0, 0, 0)
    assert f.is_nonnegative
    assert not TruncatedSeries.from_poly(P((1, -1)), 2).is_nonnegative
