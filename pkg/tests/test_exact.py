from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbifold_gw.exact import (LaurentPoly, MatSeries, OffsetGridError, PuiseuxSeries, Q, TruncationError,
                               binom_rational, const_inverse, const_matmul, format_rational, mat_det,
                               mat_equal, mat_mul, mat_trace, series_add, series_equal, series_mul,
                               series_shift_z)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
poly = st.dictionaries(st.integers(-3, 3), small, max_size=3).map(lambda d: LaurentPoly(d))


def series(order=5, offset=0):
    return st.lists(poly, min_size=order, max_size=order).map(lambda cs: PuiseuxSeries(offset, cs))


def test_format_rational():
    assert format_rational(Q(6, 3)) == "2"
    assert format_rational(Q(-7, 24)) == "-7/24"
    assert Q("3/9") == Q(1, 3)
    assert Q(Fraction(5, 10)) == Q(1, 2)


@given(st.integers(-6, 10), st.integers(0, 8))
def test_binom_matches_integer_binomial(a, n):
    expected = 1
    for j in range(n):
        expected = expected * (a - j)
    for j in range(1, n + 1):
        expected = Fraction(expected, j)
    assert binom_rational(a, n) == Q(expected)


@given(poly, poly, poly)
def test_laurent_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(poly, st.integers(-3, 3))
def test_laurent_cap_drops_high_powers(a, cap):
    b = LaurentPoly({0: 1, 2: Q(1, 3)})
    full = a.mul(b)
    capped = a.mul(b, cap=cap)
    assert capped.coeffs == {e: v for e, v in full.items() if e <= cap}


@given(series(), series(), series())
def test_series_product_commutes_and_associates(f, g, h):
    assert series_equal(series_mul(f, g), series_mul(g, f))
    assert series_equal(series_mul(series_mul(f, g), h), series_mul(f, series_mul(g, h)))


@given(series(6, offset=Q(2, 3)), series(4, offset=Q(-1, 3)))
def test_product_precision_is_min_order(f, g):
    p = series_mul(f, g)
    assert p.offset == f.offset + g.offset
    assert p.order == min(f.order, g.order)


@given(series(6))
def test_shift_roundtrip(f):
    back = series_shift_z(series_shift_z(f, 1), -1)
    assert series_equal(back, f)


def test_shift_of_reciprocal_is_geometric():
    # 1/(z+1) = Σ (-1)^n z^(-1-n)
    f = PuiseuxSeries.monomial(-1, 1, order=6)
    g = series_shift_z(f, 1)
    assert [c.coeff(0) for c in g.coeffs] == [(-1) ** n for n in range(6)]


def test_truncated_coefficient_raises():
    f = PuiseuxSeries(Q(1, 2), [1, 2, 3])
    assert f.coeff(Q(-1, 2)).coeff(0) == 2
    with pytest.raises(TruncationError):
        f.coeff(Q(-5, 2))
    with pytest.raises(OffsetGridError):
        f.coeff(0)
    with pytest.raises(OffsetGridError):
        series_add(f, PuiseuxSeries(0, [1]))


def test_exact_monomial_multiplication_keeps_order():
    f = PuiseuxSeries(0, [1, 1, 1, 1])
    g = series_mul(f, PuiseuxSeries.monomial(-2, 3))
    assert g.offset == -2 and g.order == 4
    assert g.coeff(-5).coeff(0) == 3


def test_derivative_and_positive_part():
    f = PuiseuxSeries(2, [1, 0, 5, 7], exact=True)
    d = f.derivative()
    assert d.coeff(1).coeff(0) == 2 and d.coeff(-2).coeff(0) == -7
    p = f.positive_part()
    assert p.exact and p.coeff(0).coeff(0) == 5 and p.coeff(-1).is_zero()


def _const(mat):
    return MatSeries.from_constant(mat, 0, 4)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_cofactor_expansion(rows):
    a = [[Q(x) for x in r] for r in rows]
    expected = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    assert mat_det(_const(a)).coeff(0).coeff(0) == expected


@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_rank_one_matrix_has_zero_det_and_trace_of_product(u, v):
    outer = [[Q(x) * Q(y) for y in v] for x in u]
    M = _const(outer)
    assert mat_det(M).is_zero()
    tr = mat_trace(mat_mul(M, M)).coeff(0).coeff(0)
    assert tr == sum(Q(x) * Q(y) for x, y in zip(u, v)) ** 2


def test_series_matrix_product():
    # [[1, s/z], [0, 1]]^2 = [[1, 2s/z], [0, 1]]
    one = PuiseuxSeries(0, [1, 0, 0])
    zero = PuiseuxSeries(0, [0, 0, 0])
    x = PuiseuxSeries(0, [0, LaurentPoly({1: 1}), 0])
    M = MatSeries([[one, x], [zero, one]])
    M2 = mat_mul(M, M)
    assert M2.entries[0][1].coeff(-1) == LaurentPoly({1: 2})
    assert mat_equal(mat_mul(M2, M), mat_mul(M, M2))


def test_const_inverse():
    a = [[Q(2), Q(1), Q(0)], [Q(0), Q(1), Q(3)], [Q(1), Q(0), Q(1)]]
    ident = const_matmul(a, const_inverse(a))
    assert ident == [[Q(int(i == j)) for j in range(3)] for i in range(3)]
