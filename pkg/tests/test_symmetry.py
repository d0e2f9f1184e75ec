import pytest

from orbifold_gw.exact import LaurentPoly, MatSeries, PuiseuxSeries
from orbifold_gw.structure import build_structure
from orbifold_gw.tde import (MSolution, check_annihilation, check_det, check_power_relation, check_reflection_symmetry,
                             check_trace, check_transpose_symmetry, m_matrix)

STRUCTURES = [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2)]


@pytest.mark.parametrize("mm", STRUCTURES)
def test_algebraic_identities_order_10(mm):
    st = build_structure(*mm)
    for a in st.sectors():
        sol = m_matrix(st, a, 10)
        assert check_trace(sol), a
        assert check_det(sol), a
        assert check_power_relation(st, a, 10), a
    assert check_annihilation(st, 10)


@pytest.mark.parametrize("mm", [(2, 1), (1, 2), (2, 2), (3, 1), (1, 3), (1, 1)])
def test_transpose_and_reflection(mm):
    st = build_structure(*mm)
    for a in st.swapped().sectors():
        assert check_transpose_symmetry(st, a, 10), a
        assert check_reflection_symmetry(st, a, 10), a


def _perturb(M: MatSeries, i: int, j: int, n: int, e: int) -> MatSeries:
    rows = [list(r) for r in M.entries]
    x = rows[i][j]
    cs = list(x.coeffs)
    cs[n] = cs[n] + LaurentPoly({e: 1})
    rows[i][j] = PuiseuxSeries(x.offset, cs, exact=False, cvar="s")
    return MatSeries(rows)


def test_reflection_check_rejects_corrupted_source():
    st = build_structure(2, 1)
    a = 1
    src = m_matrix(st, st.l - a, 8).M
    assert check_reflection_symmetry(st, a, 8, M_source=src)
    assert not check_reflection_symmetry(st, a, 8, M_source=_perturb(src, 0, 1, 4, 2))


def test_trace_check_distinguishes_sectors():
    # M_3 of (3,1) has trace 3; presented as sector 1 it must fail the trace check
    st = build_structure(3, 1)
    M3 = m_matrix(st, 3, 6)
    assert check_trace(M3)
    assert not check_trace(MSolution(st, 1, 6, M3.M))
