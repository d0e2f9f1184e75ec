"""Normalized solutions M_a(z, s) of the topological difference equation.

    M(z - 1, s) W(z, s) = W(z, s) M(z, s),    M_a = z^(1-q_a) (K_a + O(1/z)).

Three constructions are provided: the Bernoulli closed form of the entries
(:func:`m_entry`), the Gamma-ratio expansion of the conjugation formula
(:func:`m_entry_via_gamma`), and a simplified form for m1 == m2
(:func:`m_matrix_equal_weights`).  The order-by-order linear solve lives in
:mod:`orbifold_gw.linsolve`.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import cache as disk_cache
from .bernoulli import bernoulli_row, gen_bernoulli
from .exact import (
    ONE, ZERO, LaurentPoly, MatSeries, PuiseuxSeries, Q, Rational, TruncationError,
    binom_rational, conjugate, const_inverse, mat_add, mat_det, mat_equal, mat_mul,
    mat_trace, series_add, series_equal, series_shift_z,
)
from .structure import OrbifoldStructure, build_structure


@dataclass(frozen=True)
class MSolution:
    structure: OrbifoldStructure
    a: int
    order: int
    M: MatSeries


# ---------------------------------------------------------------------------
# closed form with generalized Bernoulli polynomials
# ---------------------------------------------------------------------------

def _binom_row(k: int) -> List[int]:
    return [math.comb(k, j) for j in range(k + 1)]


def _g_coeffs(st: OrbifoldStructure, a: int, i: int, jj: int, N: int) -> List[Dict[int, Rational]]:
    """Coefficients of z^(1-q_a-n), n < N, of g_a(z, i, jj) as {s-power: value}."""
    m1, m2, l = st.m1, st.m2, st.l
    out: List[Dict[int, Rational]] = [dict() for _ in range(N)]
    low = a <= m1
    if low:
        mu, nu, qa = m1, m2, Q(a, m1)
    else:
        mu, nu, qa = m2, m1, Q(l - a, m2)
    half = Q(1, 2)
    for l2 in range(-1, N - 1):
        num = (m1 * l2 + a + jj - i) if low else (m2 * l2 + i - jj - a)
        # num is divided by the other weight; P is the inner summation length
        if num < 0 or num % nu:
            continue
        P = num // nu
        L = 1 - l2 - qa
        spow = P + l2 + 1
        kmax = N - 2 - l2
        if low:
            xs = [(i - half - a + m2 * t) / Q(m1) - l2 for t in range(P + 1)]
        else:
            xs = [(jj - half + a - m1 + m1 * t) / Q(m2) - l2 for t in range(P + 1)]
        ws = [Q((-1) ** t, math.factorial(t) * math.factorial(P - t)) for t in range(P + 1)]
        # S[p] = Σ_t w_t x_t^p
        S = [ZERO] * (kmax + 1)
        for w, x in zip(ws, xs):
            xp = w
            for p in range(kmax + 1):
                S[p] += xp
                xp *= x
        row = bernoulli_row(L, kmax)
        base = ONE / (Q(mu) ** l2 * Q(nu) ** P)
        for k in range(kmax + 1):
            l1 = l2 + k
            bk = binom_rational(L - 1, k)
            if not bk:
                continue
            br = _binom_row(k)
            B = sum((br[j] * row[j] * S[k - j] for j in range(k + 1)), ZERO)
            if not B:
                continue
            val = base * Q(mu) ** l1 * bk * B
            d = out[l1 + 1]
            d[spow] = d.get(spow, ZERO) + val
    return out


def _entry_from(st: OrbifoldStructure, a: int, i: int, j: int, N: int, gfun) -> PuiseuxSeries:
    sign, jj = (1, j) if j <= st.m1 else (-1, j - st.l)
    cs = gfun(st, a, i, jj, N)
    polys = [LaurentPoly({e: sign * v for e, v in d.items()}, "s") for d in cs]
    return PuiseuxSeries(1 - st.q[a], polys, exact=False, cvar="s")


def m_entry(st: OrbifoldStructure, a: int, i: int, j: int, order: int) -> PuiseuxSeries:
    """(i, j) entry (1-based) of M_a to ``order`` terms, from the Bernoulli closed form."""
    st.check_sector(a)
    return _entry_from(st, a, i, j, order, _g_coeffs)


_MEMO: Dict[Tuple[int, int, int], MatSeries] = {}
_MEMO_LOCK = threading.Lock()


def _truncate_mat(M: MatSeries, order: int) -> MatSeries:
    return M.map(lambda x: x.truncate(order))


def m_matrix(st: OrbifoldStructure, a: int, order: int) -> MSolution:
    """M_a to ``order`` terms; memoized in memory and optionally on disk."""
    st.check_sector(a)
    key = (st.m1, st.m2, a)
    with _MEMO_LOCK:
        have = _MEMO.get(key)
    if have is None or have.entries[0][0].order < order:
        have = disk_cache.load(st, a, order)
        if have is None:
            l = st.l
            have = MatSeries([[m_entry(st, a, i, j, order) for j in range(1, l + 1)] for i in range(1, l + 1)])
            disk_cache.store(st, a, have)
        with _MEMO_LOCK:
            _MEMO[key] = have
    return MSolution(st, a, order, _truncate_mat(have, order))


def clear_memo() -> None:
    with _MEMO_LOCK:
        _MEMO.clear()


# ---------------------------------------------------------------------------
# m1 == m2 simplification
# ---------------------------------------------------------------------------

def _g_equal_coeffs(st: OrbifoldStructure, a: int, i: int, jj: int, N: int) -> List[Dict[int, Rational]]:
    m = st.m1
    out: List[Dict[int, Rational]] = [dict() for _ in range(N)]
    if (i - jj - a) % m:
        return out
    p = (i - jj - a) // m
    r = Q(i - jj, m)
    half = Q(1, 2)
    for k1 in range(-1, N - 1):
        n = k1 + 1
        if a <= m:
            kmax = (k1 - p) // 2
            for k2 in range(0, kmax + 1):
                deg = k1 - p - 2 * k2
                v = (binom_rational(-r - 2 * k2, deg) * binom_rational(r + 2 * k2 - 1, k2)
                     * gen_bernoulli(deg, -r - 2 * k2 + 1, (jj - half) / m - k2))
                if v:
                    e = p + 1 + 2 * k2
                    v *= Q(m) ** (k1 - p - 2 * k2)
                    out[n][e] = out[n].get(e, ZERO) + v
        else:
            kmax = (k1 + p) // 2
            for k2 in range(0, kmax + 1):
                deg = k1 + p - 2 * k2
                v = (binom_rational(r - 2 * k2 - 2, deg) * binom_rational(-r + 2 * k2 + 1, k2)
                     * gen_bernoulli(deg, r - 2 * k2 - 1, (i - half) / m - k2 - 1))
                if v:
                    e = 1 - p + 2 * k2
                    v *= Q(m) ** (k1 + p - 2 * k2)
                    out[n][e] = out[n].get(e, ZERO) + v
    return out


def m_matrix_equal_weights(st: OrbifoldStructure, a: int, order: int) -> MSolution:
    if st.m1 != st.m2:
        raise ValueError("equal-weight formula needs m1 == m2")
    st.check_sector(a)
    l = st.l
    M = MatSeries([[_entry_from(st, a, i, j, order, _g_equal_coeffs) for j in range(1, l + 1)]
                   for i in range(1, l + 1)])
    return MSolution(st, a, order, M)


# ---------------------------------------------------------------------------
# Gamma-ratio route
# ---------------------------------------------------------------------------

def gamma_ratio_coeffs(alpha, beta, order: int) -> List[Rational]:
    """c_l with Γ(w+α)/Γ(w+β) ~ w^(α-β) Σ c_l w^(-l), l < order."""
    alpha, beta = Q(alpha), Q(beta)
    d = alpha - beta
    return [binom_rational(d, k) * gen_bernoulli(k, d + 1, alpha) if binom_rational(d, k) else ZERO
            for k in range(order)]


def gamma_ratio_expansion(alpha, beta, order: int) -> PuiseuxSeries:
    alpha, beta = Q(alpha), Q(beta)
    return PuiseuxSeries(alpha - beta, gamma_ratio_coeffs(alpha, beta, order), exact=False, cvar="s")


def _g_gamma_coeffs(st: OrbifoldStructure, a: int, i: int, jj: int, N: int) -> List[Dict[int, Rational]]:
    m1, m2 = st.m1, st.m2
    out: List[Dict[int, Rational]] = [dict() for _ in range(N)]
    half = Q(1, 2)
    low = a <= m1
    mu, nu = (m1, m2) if low else (m2, m1)
    k1 = 0
    while True:
        Nk = (m2 * k1 + i - jj - a) if low else (m1 * k1 - i + jj + a)
        base_n = Nk // mu if Nk % mu == 0 else None
        # N_k grows with k1, so once the leading index passes the order we are done
        if Nk >= mu * (N - 1) + mu:
            break
        if base_n is not None:
            n0 = 1 + base_n
            if n0 < 0:
                raise AssertionError("gamma route produced a term above the leading order")
            if n0 < N:
                spow = 1 + k1 + base_n
                for k2 in range(k1 + 1):
                    w = Q((-1) ** k2, math.factorial(k2) * math.factorial(k1 - k2))
                    if low:
                        al = (jj - half - m2 * (k1 - k2)) / m1
                        be = (i - half + m2 * k2) / m1
                    else:
                        al = (i - half - m1 * (k1 - k2 + 1)) / m2
                        be = (jj - half + m1 * k2) / m2 + 1
                    cs = gamma_ratio_coeffs(al, be, N - n0)
                    for ell, c in enumerate(cs):
                        if c:
                            v = w * c * Q(mu) ** ell / Q(nu) ** k1
                            d = out[n0 + ell]
                            d[spow] = d.get(spow, ZERO) + v
        k1 += 1
    return out


def m_entry_via_gamma(st: OrbifoldStructure, a: int, i: int, j: int, order: int) -> PuiseuxSeries:
    st.check_sector(a)
    return _entry_from(st, a, i, j, order, _g_gamma_coeffs)


def m_matrix_via_gamma(st: OrbifoldStructure, a: int, order: int) -> MSolution:
    l = st.l
    M = MatSeries([[m_entry_via_gamma(st, a, i, j, order) for j in range(1, l + 1)] for i in range(1, l + 1)])
    return MSolution(st, a, order, M)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    order: int
    vanishing_order: int
    first_failure: Optional[Tuple[int, int, int]]

    @property
    def passed(self) -> bool:
        return self.vanishing_order >= self.order - 1


def tde_residual(st: OrbifoldStructure, M: MatSeries) -> MatSeries:
    """M(z-1) W - W M."""
    W = st.W()
    shifted = M.map(lambda x: series_shift_z(x, -1))
    return mat_add(mat_mul(shifted, W), -mat_mul(W, M))


def verify_tde(sol: MSolution) -> ResidualReport:
    R = tde_residual(sol.structure, sol.M)
    n_known = min(x.order for row in R.entries for x in row)
    first = None
    vanish = n_known
    for i, row in enumerate(R.entries):
        for j, x in enumerate(row):
            for n, c in enumerate(x.coeffs):
                if c and n < vanish:
                    vanish = n
                    first = (n, i + 1, j + 1)
                    break
    return ResidualReport(sol.order, vanish, first)


def is_polynomial_in_s(M: MatSeries) -> bool:
    return all(e >= 0 for row in M.entries for x in row for c in x.coeffs for e, _ in c.items())


def _identity_like(l: int, scale) -> MatSeries:
    return MatSeries.from_constant([[scale if i == j else 0 for j in range(l)] for i in range(l)], 0, None, "s")


def check_trace(sol: MSolution) -> bool:
    st, a = sol.structure, sol.a
    tr = mat_trace(sol.M)
    if a != st.m1:
        return tr.is_zero()
    return series_equal(tr, PuiseuxSeries.monomial(0, st.m1))


def check_det(sol: MSolution) -> bool:
    return mat_det(sol.M).is_zero()


def check_power_relation(st: OrbifoldStructure, a: int, order: int) -> bool:
    """M_a = s^(1-a) M_1^a for a <= m1 and (-s)^(1-l+a) M_{l-1}^(l-a) above."""
    st.check_sector(a)
    target = m_matrix(st, a, order).M
    if a <= st.m1:
        base, power, factor = 1, a, LaurentPoly.monomial(1 - a, 1, "s")
    else:
        base, power = st.l - 1, st.l - a
        e = 1 - st.l + a
        factor = LaurentPoly.monomial(e, (-1) ** (e % 2), "s")
    # each factor beyond the first costs one order of the comparison range
    B = m_matrix(st, base, order + power - 1).M
    P = B
    for _ in range(power - 1):
        P = mat_mul(P, B)
    P = P.map(lambda x: x.map_coeffs(lambda c: c * factor))
    return mat_equal(target, P)


def check_annihilation(st: OrbifoldStructure, order: int) -> bool:
    for a in range(1, st.m1 + 1):
        for b in range(st.m1 + 1, st.l):
            Ma = m_matrix(st, a, order).M
            Mb = m_matrix(st, b, order).M
            if not (mat_mul(Ma, Mb).is_zero() and mat_mul(Mb, Ma).is_zero()):
                return False
    return True


def transpose_symmetry_sides(st: OrbifoldStructure, a: int, order: int) -> Tuple[MatSeries, MatSeries]:
    """Both sides of M_a(m2,m1) = -η2^-1 M_{l-a}(m1,m2)^T η2 + I δ_{a,m2}; ``st`` is (m1, m2)."""
    sw = st.swapped()
    sw.check_sector(a)
    lhs = m_matrix(sw, a, order).M
    eta = st.eta2()
    rhs = conjugate(m_matrix(st, st.l - a, order).M.transpose(), const_inverse(eta), eta)
    rhs = -rhs
    if a == st.m2:
        rhs = mat_add(rhs, _identity_like(st.l, 1))
    return lhs, rhs


def check_transpose_symmetry(st: OrbifoldStructure, a: int, order: int) -> bool:
    lhs, rhs = transpose_symmetry_sides(st, a, order)
    return mat_equal(lhs, rhs)


def reflect(M: MatSeries) -> MatSeries:
    """(-1)^q M(-z, -s) on the grid z^(1-q-n), with (-1)^q (-1)^(1-q) read as -1."""
    def one(x: PuiseuxSeries) -> PuiseuxSeries:
        cs = tuple(c.negate_var().scale(-1 if n % 2 == 0 else 1) for n, c in enumerate(x.coeffs))
        return PuiseuxSeries(x.offset, cs, exact=x.exact, cvar=x.cvar)
    return M.map(one)


def reflection_symmetry_sides(st: OrbifoldStructure, a: int, order: int,
                              M_source: Optional[MatSeries] = None) -> Tuple[MatSeries, MatSeries]:
    sw = st.swapped()
    sw.check_sector(a)
    lhs = m_matrix(sw, a, order).M
    src = M_source if M_source is not None else m_matrix(st, st.l - a, order).M
    eta = st.eta1()
    rhs = conjugate(reflect(src), const_inverse(eta), eta)
    if a == st.m2:
        rhs = mat_add(rhs, _identity_like(st.l, 1))
    return lhs, rhs


def check_reflection_symmetry(st: OrbifoldStructure, a: int, order: int,
                              M_source: Optional[MatSeries] = None) -> bool:
    lhs, rhs = reflection_symmetry_sides(st, a, order, M_source)
    return mat_equal(lhs, rhs)
