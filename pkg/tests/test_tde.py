import pytest

from orbifold_gw import cache as disk_cache
from orbifold_gw.exact import LaurentPoly, MatSeries, Q, mat_det, mat_equal
from orbifold_gw.structure import build_structure
from orbifold_gw.tde import (clear_memo, gamma_ratio_coeffs, is_polynomial_in_s, m_entry, m_entry_via_gamma,
                             m_matrix, m_matrix_equal_weights, m_matrix_via_gamma, tde_residual, verify_tde)
from reference_p1 import p1_reference

STRUCTURES = [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2)]


@pytest.mark.parametrize("mm", STRUCTURES)
def test_residual_vanishes_to_order_10(mm):
    st = build_structure(*mm)
    for a in st.sectors():
        rep = verify_tde(m_matrix(st, a, 10))
        assert rep.passed, (a, rep)
        assert rep.first_failure is None


@pytest.mark.parametrize("mm", STRUCTURES)
def test_leading_term_and_polynomial_coefficients(mm):
    st = build_structure(*mm)
    for a in st.sectors():
        M = m_matrix(st, a, 6).M
        assert is_polynomial_in_s(M)
        assert M.entries[0][0].offset == 1 - st.q[a]
        K = st.K(a)
        for i in range(st.l):
            for j in range(st.l):
                assert M.entries[i][j].coeffs[0] == LaurentPoly.constant(K[i][j])


def test_corrupted_solution_is_detected():
    st = build_structure(2, 1)
    M = m_matrix(st, 1, 8).M
    rows = [list(r) for r in M.entries]
    e = rows[1][0]
    cs = list(e.coeffs)
    cs[3] = cs[3] + LaurentPoly({3: 1})
    rows[1][0] = type(e)(e.offset, cs, exact=False, cvar="s")
    bad = MatSeries(rows)
    assert not tde_residual(st, bad).is_zero()


@pytest.mark.parametrize("mm", [(2, 1), (2, 2), (3, 1), (1, 2)])
def test_gamma_route_equals_closed_form(mm):
    st = build_structure(*mm)
    for a in st.sectors():
        assert mat_equal(m_matrix(st, a, 8).M, m_matrix_via_gamma(st, a, 8).M)
    assert m_entry(st, 1, st.l, 1, 8) == m_entry_via_gamma(st, 1, st.l, 1, 8)


def test_equal_weight_formula():
    for m in (1, 2, 3):
        st = build_structure(m, m)
        for a in st.sectors():
            assert mat_equal(m_matrix(st, a, 8).M, m_matrix_equal_weights(st, a, 8).M)
    with pytest.raises(ValueError):
        m_matrix_equal_weights(build_structure(2, 1), 1, 4)


def test_gamma_ratio_known_expansions():
    # Γ(w+1)/Γ(w) = w
    assert gamma_ratio_coeffs(1, 0, 5) == [1, 0, 0, 0, 0]
    # Γ(w+1/2)/Γ(w) = w^(1/2) (1 - 1/(8w) + 1/(128w^2) + 5/(1024w^3) - 21/(32768w^4) + ...)
    assert gamma_ratio_coeffs(Q(1, 2), 0, 5) == [Q(x) for x in ("1", "-1/8", "1/128", "5/1024", "-21/32768")]


def _poly(d):
    return LaurentPoly({e: Q(v) for e, v in d.items()})


def test_p1_solution_matches_explicit_sums():
    """M = [[1 + α, P2 - P1], [P1 + P2, -α]] with α, P1, P2 from their double sums."""
    N = 8
    alpha, P1, P2 = p1_reference(N)
    M = m_matrix(build_structure(1, 1), 1, N).M
    assert M.entries[0][0].offset == 0
    half = Q(1, 2)
    for n in range(N):
        m11, m12, m21, m22 = (M.entries[i][j].coeffs[n] for i in (0, 1) for j in (0, 1))
        assert m11 - LaurentPoly.constant(int(n == 0)) == _poly(alpha[n])
        assert -m22 == _poly(alpha[n])
        assert (m21 - m12).scale(half) == _poly(P1[n])
        assert (m21 + m12).scale(half) == _poly(P2[n])
    # α = s^2/z^2 + ..., P1 = s/z + ...
    assert M.entries[0][0].coeffs[2] == LaurentPoly({2: 1})
    assert M.entries[1][0].coeffs[1] == LaurentPoly({1: 1})


def test_p1_upper_entry_sign_forced_by_determinant():
    # det [[1+α, ±(P1-P2)], [P1+P2, -α]] at z^-2 is -α_2 ∓ (P1_1)^2 = -s^2 ∓ s^2
    alpha, P1, _ = p1_reference(3)
    a2, p1 = _poly(alpha[2]), _poly(P1[1])
    assert (-a2 + p1 * p1).is_zero()
    assert not (-a2 - p1 * p1).is_zero()
    assert mat_det(m_matrix(build_structure(1, 1), 1, 10).M).is_zero()


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    st = build_structure(3, 1)
    M = m_matrix(st, 2, 7).M
    text = disk_cache.dumps(st, 2, M)
    assert mat_equal(disk_cache.loads(text, st, 2), M)
    with pytest.raises(ValueError):
        disk_cache.loads(text, st, 1)

    monkeypatch.setenv("GW_CACHE_DIR", str(tmp_path))
    clear_memo()
    fresh = m_matrix(st, 1, 6).M
    path = tmp_path / "M_3_1_1.txt"
    assert path.exists()
    assert path.read_text().startswith(disk_cache.MAGIC)
    clear_memo()
    assert mat_equal(m_matrix(st, 1, 6).M, fresh)
    # a request beyond the stored order recomputes and overwrites
    clear_memo()
    m_matrix(st, 1, 9)
    assert "order 9" in path.read_text()
    clear_memo()
