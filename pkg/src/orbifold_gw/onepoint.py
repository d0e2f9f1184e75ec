"""One-point invariants <τ_i(φ_a)>_{g,d}.

Two routes: the Euler-Maclaurin operator applied to the (m1+1, 1) entry of
M_a(z - 1, s), and the explicit Bernoulli sums.  Degree-zero numbers come
from the first term of the a = m1 generating series.
"""
from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from .bernoulli import bernoulli_number, euler_maclaurin_coeffs, gen_bernoulli
from .correlators import InvariantRecord
from .exact import ONE, ZERO, Q, Rational, binom_rational, series_shift_z
from .structure import OrbifoldStructure, degree_from_dimension, q_norm
from .tde import m_matrix

Key = Tuple[int, int]   # (i, g)


def degree_zero_one_point(g: int) -> Rational:
    """(1 - 2^(2g-1)) B_2g / (2^(2g-1) (2g)!)."""
    two = Q(2) ** (2 * g - 1)
    return (1 - two) * bernoulli_number(2 * g) / (two * math.factorial(2 * g))


def _records(st: OrbifoldStructure, a: int, values: Dict[Key, Rational], i_max: int, g_max: int) -> List[InvariantRecord]:
    out = []
    for i in range(i_max + 1):
        for g in range(g_max + 1):
            d = degree_from_dimension(st, g, [(a, i)])
            v = values.get((i, g), ZERO)
            out.append(InvariantRecord(st.m1, st.m2, ((a, i),), g, d, v, d is None))
    return out


def one_point_values_operator(st: OrbifoldStructure, a: int, i_max: int) -> Dict[Key, Rational]:
    """All <τ_i(φ_a)>_g with i <= i_max, every genus the series reaches.

    In z = λ/ε, s = 1/ε the derivative of F_a is -Σ c_k ∂_z^k f(z) (plus
    δ s/z, which carries no invariant), with f(z) = M_a(z-1, s)_{m1+1,1}.
    The invariant sits at z^(-(i+q+2)) s^(i+3-2g) with weight -(i+q+1) q_{a,i}.
    """
    st.check_sector(a)
    N = i_max + 4
    f = m_matrix(st, a, N).M.entries[st.m1][0]
    f = series_shift_z(f, -1)
    c = euler_maclaurin_coeffs(i_max + 3)
    q = st.q[a]
    out: Dict[Key, Rational] = {}
    for i in range(i_max + 1):
        target = -(i + q + 2)
        total: Dict[int, Rational] = {}
        # ∂^k z^(1-q-n) lands on the target when n + k = i + 3
        for k in range(i + 4):
            n = i + 3 - k
            e = 1 - q - n
            fk = f.coeff(e)
            if not fk:
                continue
            w = c[k] * _falling(e, k)
            for p, v in fk.items():
                total[p] = total.get(p, ZERO) - w * v
        denom = -(i + q + 1) * q_norm(st, a, i)
        for p, v in total.items():
            two_g = i + 3 - p
            if v and two_g % 2 == 0 and two_g >= 0:
                out[(i, two_g // 2)] = v / denom
            elif v:
                raise AssertionError(f"one-point coefficient at odd or negative genus: i={i}, s^{p}")
    return out


def _falling(x, k: int) -> Rational:
    out = ONE
    for j in range(k):
        out *= x - j
    return out


def one_point_series(st: OrbifoldStructure, a: int, i_max: int, g_max: int) -> List[InvariantRecord]:
    vals = one_point_values_operator(st, a, i_max)
    return _records(st, a, vals, i_max, g_max)


def one_point_values_closed(st: OrbifoldStructure, a: int, i_max: int, g_max: int) -> Dict[Key, Rational]:
    st.check_sector(a)
    m1, m2, l = st.m1, st.m2, st.l
    out: Dict[Key, Rational] = {}
    if a == m1:
        for g in range(1, g_max + 1):
            i = 2 * g - 2
            if i <= i_max:
                out[(i, g)] = degree_zero_one_point(g)
    if a <= m1:
        mu, nu, shift = m1, m2, a
    else:
        mu, nu, shift = m2, m1, l - a
    q = st.q[a]
    for g in range(g_max + 1):
        # the k1 = 0 term is the degree-zero series already added above
        k1 = 1
        while True:
            num = nu * k1 - shift
            k2 = 2 * g - 1 + k1
            if num >= 0 and num % mu == 0:
                i = num // mu + k2
            else:
                i = None
            if (nu * k1 - shift) / Q(mu) + k2 > i_max:
                break
            if i is not None and k2 >= 0:
                r = Q(nu * k1, mu)
                S = ZERO
                for k3 in range(nu * k1):
                    t = k3 // nu
                    S += (-1) ** t * math.comb(k1 - 1, t) * gen_bernoulli(k2, -r, -(k3 + Q(1, 2)) / mu)
                val = -(-1) ** k1 * Q(mu) ** k2 * binom_rational(-r - 1, k2) * S
                val /= Q(nu) ** k1 * math.factorial(k1) * q_norm(st, a, i)
                if val:
                    out[(i, g)] = out.get((i, g), ZERO) + val
            k1 += 1
    return out


def one_point_closed(st: OrbifoldStructure, a: int, i_max: int, g_max: int) -> List[InvariantRecord]:
    return _records(st, a, one_point_values_closed(st, a, i_max, g_max), i_max, g_max)


def one_point_values_equal_weights(st: OrbifoldStructure, a: int, i_max: int, g_max: int) -> Dict[Key, Rational]:
    """m1 == m2: zero unless a == m1, else the simplified Bernoulli sum."""
    if st.m1 != st.m2:
        raise ValueError("needs m1 == m2")
    st.check_sector(a)
    if a != st.m1:
        return {}
    m = st.m1
    out: Dict[Key, Rational] = {}
    for g in range(1, g_max + 1):
        if 2 * g - 2 <= i_max:
            out[(2 * g - 2, g)] = degree_zero_one_point(g)
    for g in range(g_max + 1):
        k1 = 1
        while True:
            k2 = 2 * g - 1 + k1
            i = k1 + k2 - 1
            if i > i_max:
                break
            if k2 >= 0 and k2 - k1 + 1 >= 0:
                S = sum((gen_bernoulli(k2 - k1 + 1, 1 - 2 * k1, 1 - k1 - (k3 + Q(1, 2)) / m) for k3 in range(m)), ZERO)
                val = (-(-1) ** (k1 + k2) * Q(m) ** (k2 - k1) * math.factorial(k1 + k2)
                       / (math.factorial(k1) ** 2 * math.factorial(k2 - k1 + 1))) * S
                val /= q_norm(st, a, i)
                if val:
                    out[(i, g)] = out.get((i, g), ZERO) + val
            k1 += 1
    return out


def one_point_invariant(st: OrbifoldStructure, a: int, i: int, g: int) -> InvariantRecord:
    d = degree_from_dimension(st, g, [(a, i)])
    vals = one_point_values_operator(st, a, i)
    v = vals.get((i, g), ZERO)
    return InvariantRecord(st.m1, st.m2, ((a, i),), g, d, v, d is None)
