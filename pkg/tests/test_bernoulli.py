import math
from fractions import Fraction

from hypothesis import given, strategies as st

from orbifold_gw.bernoulli import (BernoulliCache, bernoulli_number, bernoulli_row, euler_maclaurin_coeffs,
                                   gen_bernoulli)
from orbifold_gw.exact import Q

ell_s = st.fractions(min_value=-4, max_value=4, max_denominator=5)
x_s = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def miller_row(ell, K):
    """m! [t^m] (t/(e^t-1))^l by the J.C.P. Miller power recurrence, in Fractions."""
    # a_n: Taylor coefficients of t/(e^t-1) from the classical Bernoulli recurrence
    B = [Fraction(1)]
    for n in range(1, K + 1):
        B.append(-sum(math.comb(n + 1, k) * B[k] for k in range(n)) / Fraction(n + 1))
    a = [B[n] / math.factorial(n) for n in range(K + 1)]
    b = [Fraction(1)]
    for n in range(1, K + 1):
        b.append(sum(((ell + 1) * k - n) * a[k] * b[n - k] for k in range(1, n + 1)) / n)
    return [b[m] * math.factorial(m) for m in range(K + 1)]


def test_classical_numbers():
    expected = ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30", "0", "5/66", "0", "-691/2730"]
    assert [bernoulli_number(m) for m in range(13)] == [Q(x) for x in expected]


def test_euler_maclaurin_coefficients():
    assert euler_maclaurin_coeffs(6) == [Q(x) for x in ("1", "1/2", "1/12", "0", "-1/720", "0", "1/30240")]


@given(ell_s)
def test_row_matches_miller_recurrence(ell):
    assert bernoulli_row(ell, 12, BernoulliCache()) == [Q(v) for v in miller_row(ell, 12)]


@given(ell_s, x_s, st.integers(0, 9))
def test_polynomial_is_binomial_convolution_with_powers(ell, x, m):
    row = miller_row(ell, m)
    expected = sum(math.comb(m, j) * row[j] * x ** (m - j) for j in range(m + 1))
    assert gen_bernoulli(m, ell, x) == Q(expected)


@given(ell_s, ell_s, x_s, x_s, st.integers(0, 8))
def test_addition_formula(l1, l2, x, y, m):
    lhs = gen_bernoulli(m, l1 + l2, x + y)
    rhs = sum(math.comb(m, j) * gen_bernoulli(j, l1, x) * gen_bernoulli(m - j, l2, y) for j in range(m + 1))
    assert lhs == rhs


@given(ell_s, x_s, st.integers(1, 9))
def test_difference_equation(ell, x, m):
    assert gen_bernoulli(m, ell, x + 1) - gen_bernoulli(m, ell, x) == m * gen_bernoulli(m - 1, ell - 1, x)


def test_zero_exponent_gives_monomials():
    assert gen_bernoulli(5, 0, Q(2, 3)) == Q(2, 3) ** 5


def test_cache_rows_grow_consistently():
    c = BernoulliCache()
    short = c.row(Q(3, 2), 4)
    long = c.row(Q(3, 2), 20)
    assert long[:5] == short and len(long) == 21
    assert c.max_order >= 20
    c.clear()
    assert c.max_order == -1
