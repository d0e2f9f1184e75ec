"""Direct evaluation of the k-point generating function for k = 2, 3.

    F_{a_1..a_k} = - Σ_{cyclic orders σ} Tr Π_j M_{a_σ(j)}(λ_σ(j)/ε, 1/ε) / Π_j (λ_σ(j) - λ_σ(j+1))
                   - [k = 2] correction,

expanded in the nested region |λ_1| > |λ_2| > ... .  Works directly with the
coefficients of M_a, without the R-series recursion.

Exponent bookkeeping: the term c s^p z^(1-q-n) of M_a(λ/ε, 1/ε) is
c λ^(1-q-n) ε^(n-p-1+q).  The invariant <Π τ_{j_r}(φ_{a_r})>_g sits at
Π λ_r^(-j_r-q_r-1) ε^(2g-2+Σq) with weight Π q_{a_r, j_r}.
"""
from __future__ import annotations

from itertools import permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .correlators import InvariantRecord
from .exact import ZERO, Q, Rational, TruncationError
from .structure import OrbifoldStructure, degree_from_dimension, q_norm
from .tde import m_matrix

Poly = Dict[int, Rational]       # ε-exponent (integer part n - p) -> value


def _cyclic_orders(k: int) -> List[Tuple[int, ...]]:
    """Representatives of S_k / C_k starting with 0."""
    return [(0,) + p for p in permutations(range(1, k))]


def _coeff_mats(st: OrbifoldStructure, a: int, order: int) -> List[List[List[Poly]]]:
    """C_n as l x l matrices of {n - p: value}."""
    M = m_matrix(st, a, order).M
    l = st.l
    out = []
    for n in range(order):
        mat = [[{} for _ in range(l)] for _ in range(l)]
        for i in range(l):
            for j in range(l):
                for p, v in M.entries[i][j].coeffs[n].items():
                    mat[i][j][n - p] = v
        out.append(mat)
    return out


def _mat_prod(A, B):
    l = len(A)
    out = [[{} for _ in range(l)] for _ in range(l)]
    for i in range(l):
        for k in range(l):
            aik = A[i][k]
            if not aik:
                continue
            for j in range(l):
                bkj = B[k][j]
                if not bkj:
                    continue
                d = out[i][j]
                for e1, v1 in aik.items():
                    for e2, v2 in bkj.items():
                        d[e1 + e2] = d.get(e1 + e2, ZERO) + v1 * v2
    return out


def _trace(A) -> Poly:
    d: Poly = {}
    for i in range(len(A)):
        for e, v in A[i][i].items():
            d[e] = d.get(e, ZERO) + v
    return d


def kpoint_coeff(st: OrbifoldStructure, sectors: Sequence[int], levels: Sequence[int],
                 order: Optional[int] = None) -> Poly:
    """{Σ(n_r - p_r): value} for the coefficient of Π λ_r^(-j_r-q_r-1).

    The ε-power of an entry is that key plus Σ(q_r - 1).
    """
    k = len(sectors)
    if k not in (2, 3):
        raise ValueError("direct evaluation supports k = 2 or 3")
    for a in sectors:
        st.check_sector(a)
    J = sum(levels)
    if order is None:
        order = J + 2 * k + 2
    C = [_coeff_mats(st, a, order) for a in sectors]
    total: Poly = {}
    for sigma in _cyclic_orders(k):
        # factor t-th: 1/(λ_u - λ_v) with u = σ(t), v = σ(t+1)
        factors = [(sigma[t], sigma[(t + 1) % k]) for t in range(k)]
        bound = J + 2 * k
        for ts in product(range(bound + 1), repeat=k):
            sign = 1
            D = [0] * k
            for (u, v), t in zip(factors, ts):
                if u < v:       # |λ_u| > |λ_v|: Σ λ_v^t λ_u^(-t-1)
                    D[v] += t
                    D[u] -= t + 1
                else:           # -1/(λ_v - λ_u)
                    sign = -sign
                    D[u] += t
                    D[v] -= t + 1
            # λ_r exponent 1 - q_r - n_r + D_r must equal -j_r - q_r - 1
            ns = [levels[r] + 2 + D[r] for r in range(k)]
            if any(n < 0 for n in ns):
                continue
            if any(n >= order for n in ns):
                raise TruncationError(f"direct k-point evaluation needs order > {max(ns)}")
            P = C[sigma[0]][ns[sigma[0]]]
            for r in sigma[1:]:
                P = _mat_prod(P, C[r][ns[r]])
            for e, v in _trace(P).items():
                # overall minus sign of the formula
                total[e] = total.get(e, ZERO) - sign * v
    if k == 2:
        for e, v in _correction_k2(st, sectors, levels).items():
            total[e] = total.get(e, ZERO) - v
    return {e: v for e, v in total.items() if v}


def _correction_k2(st: OrbifoldStructure, sectors, levels) -> Poly:
    """Coefficient of the k = 2 correction at the invariant exponents.

    Its numerator is a polynomial in λ_1, λ_2 times λ_1^(-q_1) λ_2^(-q_2)/ε,
    so the λ_2-power is at least -q_2 after expanding 1/(λ_1-λ_2)^2 and never
    reaches -j_2 - q_2 - 1.  Returned for completeness as a general coefficient.
    """
    a1, a2 = sectors
    j1, j2 = levels
    m1, l = st.m1, st.l
    terms = []          # (λ1 power, λ2 power, ε power offset, value)
    if a1 + a2 == m1:
        terms += [(1, 0, a1), (0, 1, a2)]
    if a1 == m1 and a2 == m1:
        terms += [(1, 1, m1)]
    if a1 + a2 == m1 + l:
        terms += [(1, 0, l - a1), (0, 1, l - a2)]
    out: Poly = {}
    for x, y, v in terms:
        # λ_1^(x-n-2) λ_2^(y+n) must hit λ_1^(-j1-1), λ_2^(-j2-1) after the q-shifts
        n = -j2 - 1 - y
        if n >= 0 and x - n - 2 == -j1 - 1:
            # the ε-power -1 (+1 for the middle term) is outside the invariant grid; keep key bookkeeping
            e = (1 if (x, y) == (1, 1) else 0) - 1 + 2 - sum(st.q[a] for a in sectors)
            out[int(e)] = out.get(int(e), ZERO) + Q(v) * (n + 1)
    return out


def kpoint_direct(st: OrbifoldStructure, sectors: Sequence[int], levels: Sequence[int], g: int,
                  order: Optional[int] = None) -> InvariantRecord:
    """<Π τ_{j_r}(φ_{a_r})>_g from the direct k-point formula (k = 2, 3)."""
    k = len(sectors)
    poly = kpoint_coeff(st, sectors, levels, order)
    # ε-power 2g - 2 + Σ q  ==  key + Σ(q - 1)  ->  key = 2g - 2 + k
    key = 2 * g - 2 + k
    ins = tuple(sorted(zip(sectors, levels)))
    d = degree_from_dimension(st, g, ins)
    norm = Q(1)
    for a, j in zip(sectors, levels):
        norm *= q_norm(st, a, j)
    v = poly.get(key, ZERO) / norm
    return InvariantRecord(st.m1, st.m2, ins, g, d, v, d is None)
