import pytest

from orbifold_gw.correlators import extract_invariant
from orbifold_gw.exact import Q
from orbifold_gw.kpoint import _correction_k2, kpoint_coeff, kpoint_direct
from orbifold_gw.structure import build_structure, degree_from_dimension


def _pairs(st, levels=2, gmax=2):
    for a1 in st.sectors():
        for a2 in st.sectors():
            for j1 in range(levels + 1):
                for j2 in range(levels + 1):
                    for g in range(gmax + 1):
                        if degree_from_dimension(st, g, [(a1, j1), (a2, j2)]) is not None:
                            yield (a1, a2), (j1, j2), g


@pytest.mark.parametrize("mm", [(1, 1), (2, 1), (3, 1), (2, 2), (1, 2)])
def test_two_point_direct_equals_r_series(mm):
    st = build_structure(*mm)
    n = 0
    for sec, lev, g in _pairs(st):
        ins = list(zip(sec, lev))
        assert kpoint_direct(st, sec, lev, g).value == extract_invariant(st, ins, g).value, (sec, lev, g)
        n += 1
    assert n > 0


@pytest.mark.parametrize("mm,sec,lev,g", [((2, 1), (1, 1, 1), (1, 1, 1), 1), ((2, 1), (1, 2, 1), (1, 1, 2), 1),
                                          ((3, 1), (1, 2, 3), (1, 0, 2), 1), ((2, 2), (2, 2, 2), (1, 1, 1), 1),
                                          ((2, 2), (1, 3, 2), (1, 1, 0), 0)])
def test_three_point_direct_equals_r_series(mm, sec, lev, g):
    st = build_structure(*mm)
    assert kpoint_direct(st, sec, lev, g).value == extract_invariant(st, list(zip(sec, lev)), g).value


def test_three_point_nonzero_example():
    st = build_structure(2, 1)
    assert kpoint_direct(st, (1, 1, 1), (1, 1, 1), 1).value == Q(-1, 8)


def test_correction_and_arity_limits():
    st = build_structure(2, 2)
    for a in st.sectors():
        for b in st.sectors():
            assert not _correction_k2(st, (a, b), (0, 0))
    with pytest.raises(ValueError):
        kpoint_coeff(st, (1, 1, 1, 1), (0, 0, 0, 0))
