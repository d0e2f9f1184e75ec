from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbifold_gw.exact import Q, mat_equal
from orbifold_gw.linsolve import (InconsistentSystem, InsufficientBuffer, SparseRREF, solve_tde_linear,
                                  specialize)
from orbifold_gw.structure import build_structure
from orbifold_gw.tde import m_matrix

nonzero = st.fractions(min_value=-4, max_value=4, max_denominator=9).filter(bool)


def test_rref_solves_and_detects_inconsistency():
    R = SparseRREF()
    R.add({0: 1, 1: 1}, 3)
    assert R.value(0) is None
    R.add({0: 1, 1: -1}, 1)
    assert (R.value(0), R.value(1)) == (2, 1)
    R.add({0: 2, 1: 2}, 6)          # redundant
    with pytest.raises(InconsistentSystem):
        R.add({0: 1}, 5)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_rref_matches_substitution(A, x):
    b = [sum(a * v for a, v in zip(row, x)) for row in A]
    R = SparseRREF()
    for row, rhs in zip(A, b):
        R.add({j: v for j, v in enumerate(row)}, rhs)
    for j in range(3):
        v = R.value(j)
        if v is not None:
            assert v == x[j] or not any(row[j] for row in A)


@pytest.mark.parametrize("mm", [(2, 1), (2, 2), (1, 2), (3, 1)])
@pytest.mark.parametrize("s0", [Q(3, 7), Q(-5, 2)])
def test_linear_solve_equals_closed_form(mm, s0):
    st_ = build_structure(*mm)
    for a in st_.sectors():
        assert mat_equal(solve_tde_linear(st_, a, 8, s0), specialize(m_matrix(st_, a, 8).M, s0))


@given(nonzero)
def test_linear_solve_random_point(s0):
    st_ = build_structure(2, 1)
    assert mat_equal(solve_tde_linear(st_, 2, 6, s0), specialize(m_matrix(st_, 2, 6).M, s0))


def test_small_buffer_grows_or_raises():
    st_ = build_structure(3, 1)
    M = solve_tde_linear(st_, 1, 6, Fraction(1, 3), buffer=1)
    assert mat_equal(M, specialize(m_matrix(st_, 1, 6).M, Fraction(1, 3)))
    with pytest.raises(InsufficientBuffer):
        solve_tde_linear(st_, 1, 6, Fraction(1, 3), buffer=1, max_buffer=1)
    with pytest.raises(ValueError):
        solve_tde_linear(st_, 1, 6, 0)
