"""Multi-point invariants from the R-series commutator recursion.

R-series are matrix Laurent series in λ^(-1) whose coefficients are
polynomials in ε.  Starting from

    R_{a,∅}(λ; ε) = ε^(1-q_a) λ^(q_a) M_a(λ/ε, 1/ε),

insertions are added one at a time by commutators with polynomial parts,
and traces of products of two R-series divided by (λ-μ)^2 give generating
series of invariants with two distinguished insertions.  The expansion
region is |λ| > |μ| throughout: 1/(λ-μ)^2 = Σ_n (n+1) μ^n λ^(-n-2).

Q is set to 1; degrees are recovered from the dimension constraint.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import (
    ZERO, LaurentPoly, MatSeries, PuiseuxSeries, Q, Rational, TruncationError,
    mat_add, mat_mul, mat_trace,
)
from .structure import OrbifoldStructure, degree_from_dimension, q_norm
from .tde import m_matrix

Insertion = Tuple[int, int]          # (sector a, descendant level i)
EPS = "e"


class InvariantViolation(AssertionError):
    """A structural property that must hold by construction failed."""


@dataclass(frozen=True)
class InvariantRecord:
    m1: int
    m2: int
    insertions: Tuple[Insertion, ...]
    g: int
    d: Optional[int]
    value: Rational
    vanishes: bool = False

    def degree_text(self) -> str:
        return "vanishes (degree-dimension)" if self.d is None else str(self.d)


def canonical_insertions(insertions: Iterable[Insertion]) -> Tuple[Insertion, ...]:
    return tuple(sorted((int(a), int(i)) for a, i in insertions))


# ---------------------------------------------------------------------------
# R-series
# ---------------------------------------------------------------------------

def r_base(st: OrbifoldStructure, a: int, order: int, eps_cap: Optional[int] = None) -> MatSeries:
    """R_{a,∅} to ``order`` terms in λ^(-1).

    The term c s^p z^(1-q-n) of M_a becomes c λ^(1-n) ε^(n-p).
    """
    M = m_matrix(st, a, order).M
    rows = []
    for row in M.entries:
        out = []
        for x in row:
            cs = []
            for n, c in enumerate(x.coeffs):
                d = {}
                for p, v in c.items():
                    e = n - p
                    if e < 0:
                        raise InvariantViolation(f"negative ε-power {e} in R-series of sector {a}")
                    if eps_cap is None or e <= eps_cap:
                        d[e] = v
                cs.append(LaurentPoly(d, EPS))
            out.append(PuiseuxSeries(1, cs, exact=False, cvar=EPS))
        rows.append(out)
    return MatSeries(rows)


def positive_part(X: MatSeries) -> MatSeries:
    return X.map(lambda x: x.positive_part())


def commutator(P: MatSeries, R: MatSeries, cap: Optional[int]) -> MatSeries:
    return mat_add(mat_mul(P, R, cap), -mat_mul(R, P, cap))


def _sub_multisets(counts: Tuple[int, ...]):
    """All u <= counts with the multiplicity Π C(counts_s, u_s) of picking that sub-multiset."""
    for u in product(*(range(c + 1) for c in counts)):
        mult = 1
        for c, k in zip(counts, u):
            mult *= math.comb(c, k)
        yield u, mult


class RFamily:
    """R^b_{counts} for a fixed list of insertion types, memoized.

    ``counts[t]`` is how many insertions of ``types[t]`` have been applied.
    The recursion removes one insertion of the first present type and sums
    over the ways of splitting the rest, weighting each sub-multiset by the
    number of labelled subsets it represents.
    """

    def __init__(self, st: OrbifoldStructure, types: Sequence[Insertion], order: int,
                 eps_cap: Optional[int] = None):
        self.st = st
        self.types = tuple(types)
        self.order = order
        self.eps_cap = eps_cap
        self._memo: Dict[Tuple[int, Tuple[int, ...]], MatSeries] = {}
        self._plus: Dict[Tuple[int, Tuple[int, ...]], MatSeries] = {}

    def base(self, b: int) -> MatSeries:
        return self.get(b, (0,) * len(self.types))

    def get(self, b: int, counts: Tuple[int, ...]) -> MatSeries:
        key = (b, counts)
        got = self._memo.get(key)
        if got is not None:
            return got
        if not any(counts):
            R = r_base(self.st, b, self.order, self.eps_cap)
        else:
            t = next(k for k, c in enumerate(counts) if c)
            rest = list(counts)
            rest[t] -= 1
            rest = tuple(rest)
            R = None
            for u, mult in _sub_multisets(rest):
                P = self.plus_part(t, u)
                v = tuple(r - x for r, x in zip(rest, u))
                term = commutator(P, self.get(b, v), self.eps_cap)
                if mult != 1:
                    term = term * mult
                R = term if R is None else mat_add(R, term)
        self._memo[key] = R
        return R

    def plus_part(self, t: int, counts: Tuple[int, ...]) -> MatSeries:
        """(λ^i R_{a,counts})_+ for insertion type t = (a, i)."""
        key = (t, counts)
        got = self._plus.get(key)
        if got is None:
            a, i = self.types[t]
            got = positive_part(self.get(a, counts).map(lambda x: x.mul_z(i)))
            self._plus[key] = got
        return got


def r_next(st: OrbifoldStructure, fixed: Insertion, b: int, m: int,
           prior: Mapping[Tuple[int, int], MatSeries], eps_cap: Optional[int] = None) -> MatSeries:
    """R^{(a,i)}_{b,m} = Σ_l C(m-1,l) [(λ^i R_{a,l})_+, R_{b,m-1-l}] from ``prior[(c, l)]``, l < m."""
    a, i = fixed
    if m < 1:
        raise ValueError("m must be at least 1")
    total = None
    for ell in range(m):
        P = positive_part(prior[(a, ell)].map(lambda x: x.mul_z(i)))
        term = commutator(P, prior[(b, m - 1 - ell)], eps_cap)
        c = math.comb(m - 1, ell)
        if c != 1:
            term = term * c
        total = term if total is None else mat_add(total, term)
    return total


def r_subset_form(st: OrbifoldStructure, labels: Mapping[int, Insertion], b: int, K: FrozenSet[int],
                  order: int, memo: Optional[dict] = None, eps_cap: Optional[int] = None) -> MatSeries:
    """R^b_{K} for labelled insertions, summing over all set splittings I ⊔ J = K minus its least label."""
    if memo is None:
        memo = {}
    key = (b, K)
    if key in memo:
        return memo[key]
    if not K:
        R = r_base(st, b, order, eps_cap)
    else:
        k1 = min(K)
        a1, i1 = labels[k1]
        rest = sorted(K - {k1})
        R = None
        for mask in range(1 << len(rest)):
            I = frozenset(x for bit, x in enumerate(rest) if mask >> bit & 1)
            J = frozenset(rest) - I
            P = positive_part(r_subset_form(st, labels, a1, I, order, memo, eps_cap).map(lambda x: x.mul_z(i1)))
            term = commutator(P, r_subset_form(st, labels, b, J, order, memo, eps_cap), eps_cap)
            R = term if R is None else mat_add(R, term)
    memo[key] = R
    return R


# ---------------------------------------------------------------------------
# two-point kernel
# ---------------------------------------------------------------------------

def _top(M: MatSeries):
    return max(x.offset for row in M.entries for x in row)


def _coeff_matrix(M: MatSeries, e) -> List[List[LaurentPoly]]:
    return [[x.coeff(e) for x in row] for row in M.entries]


def _trace_prod(A: List[List[LaurentPoly]], B: List[List[LaurentPoly]], cap: Optional[int]) -> LaurentPoly:
    l = len(A)
    acc = LaurentPoly({}, EPS)
    for i in range(l):
        for k in range(l):
            if A[i][k] and B[k][i]:
                acc = acc + A[i][k].mul(B[k][i], cap)
    return acc


def trace_pair_coeff(A: MatSeries, B: MatSeries, x: int, y: int, cap: Optional[int] = None) -> LaurentPoly:
    """Coefficient of λ^x μ^y in Tr A(λ) B(μ) / (λ - μ)^2, region |λ| > |μ|."""
    acc = LaurentPoly({}, EPS)
    top = _top(A)
    n = 0
    while x + n + 2 <= top:
        Ac = _coeff_matrix(A, x + n + 2)
        if any(c for row in Ac for c in row):
            Bc = _coeff_matrix(B, y - n)
            t = _trace_prod(Ac, Bc, cap)
            if t:
                acc = acc + t.scale(n + 1)
        n += 1
    return acc


def correction_coeff(st: OrbifoldStructure, b: int, c: int, x: int, y: int) -> LaurentPoly:
    """Coefficient of λ^x μ^y in the m = 0 correction numerator over (λ - μ)^2."""
    m1, l = st.m1, st.l
    num: Dict[Tuple[int, int], Rational] = {}

    def add(ex, ey, v):
        if v:
            num[(ex, ey)] = num.get((ex, ey), ZERO) + Q(v)

    if b + c == m1:
        add(1, 0, b)
        add(0, 1, c)
    if b == m1 and c == m1:
        add(1, 1, m1)
    if b + c == 2 * m1 + st.m2:
        add(1, 0, l - b)
        add(0, 1, l - c)
    total = ZERO
    for (ex, ey), v in num.items():
        # λ^ex μ^ey Σ (n+1) μ^n λ^(-n-2)
        n = y - ey
        if n >= 0 and ex - n - 2 == x:
            total += v * (n + 1)
    return LaurentPoly.constant(total, EPS)


def two_point_coeff(st: OrbifoldStructure, family: RFamily, b: int, c: int, counts: Tuple[int, ...],
                    x: int, y: int, cap: Optional[int] = None) -> LaurentPoly:
    """Coefficient of λ^x μ^y of Σ_{I⊔J} Tr R_{b,I}(λ) R_{c,J}(μ)/(λ-μ)^2 minus the m = 0 correction."""
    acc = LaurentPoly({}, EPS)
    for u, mult in _sub_multisets(counts):
        v = tuple(n - k for n, k in zip(counts, u))
        t = trace_pair_coeff(family.get(b, u), family.get(c, v), x, y, cap)
        if t:
            acc = acc + t.scale(mult)
    if not any(counts):
        acc = acc - correction_coeff(st, b, c, x, y)
    return acc


def two_point_kernel(st: OrbifoldStructure, b: int, c: int, fixed: Insertion, m: int,
                     j1max: int, j2max: int, order: Optional[int] = None,
                     eps_cap: Optional[int] = None) -> Dict[Tuple[int, int], LaurentPoly]:
    """{(j1, j2): ε-polynomial} with j1 <= j1max, j2 <= j2max: the coefficients of
    λ^(-j1-1) μ^(-j2-1) in Σ_l C(m,l) Tr R_{b,l}(λ) R_{c,m-l}(μ)/(λ-μ)^2 minus the m = 0 correction."""
    a, i = fixed
    if order is None:
        order = j1max + j2max + 3 + m * (i + 1) + 2
    fam = RFamily(st, [fixed], order, eps_cap)
    return {(j1, j2): two_point_coeff(st, fam, b, c, (m,), -j1 - 1, -j2 - 1, eps_cap)
            for j1 in range(j1max + 1) for j2 in range(j2max + 1)}


# ---------------------------------------------------------------------------
# extraction
# ---------------------------------------------------------------------------

def default_order(insertions: Sequence[Insertion]) -> int:
    """λ-order budget: j1 + j2 + 3 + Σ (i + 1) over the fixed insertions, plus a margin of 2."""
    ins = sorted(insertions, key=lambda t: t[1])
    (b, j1), (c, j2) = ins[0], ins[1]
    rest = ins[2:]
    return j1 + j2 + 3 + sum(i + 1 for _, i in rest) + 2


def _split(insertions: Sequence[Insertion]):
    """Distinguished pair (the two lowest descendant levels) and the remaining multiset."""
    ins = sorted(insertions, key=lambda t: (t[1], t[0]))
    (b, j1), (c, j2) = ins[0], ins[1]
    rest = Counter(ins[2:])
    types = sorted(rest)
    return (b, j1), (c, j2), types, tuple(rest[t] for t in types)


def multipoint_eps_poly(st: OrbifoldStructure, insertions: Sequence[Insertion], order: Optional[int] = None,
                        eps_cap: Optional[int] = None, max_retries: int = 4) -> LaurentPoly:
    """Σ_g ε^(2g+m) Π q · <insertions>_g as an ε-polynomial (k >= 2)."""
    if len(insertions) < 2:
        raise ValueError("need at least two insertions")
    (b, j1), (c, j2), types, counts = _split(insertions)
    N = order if order is not None else default_order(insertions)
    for _ in range(max_retries + 1):
        fam = RFamily(st, types, N, eps_cap)
        try:
            return two_point_coeff(st, fam, b, c, counts, -j1 - 1, -j2 - 1, eps_cap)
        except TruncationError:
            if order is not None:
                raise
            N += 4
    raise TruncationError(f"λ-order budget exhausted at {N}")


def extract_invariant(st: OrbifoldStructure, insertions: Sequence[Insertion], g: int,
                      order: Optional[int] = None) -> InvariantRecord:
    """<Π τ_i(φ_a)>_{g,d} with d fixed by the dimension constraint."""
    ins = canonical_insertions(insertions)
    for a, i in ins:
        st.check_sector(a)
        if i < 0:
            raise ValueError("descendant levels are nonnegative")
    d = degree_from_dimension(st, g, ins)
    k = len(ins)
    if k == 1:
        from .onepoint import one_point_invariant
        return one_point_invariant(st, ins[0][0], ins[0][1], g)
    if d is None:
        return InvariantRecord(st.m1, st.m2, ins, g, None, ZERO, True)
    m = k - 2
    poly = multipoint_eps_poly(st, ins, order, eps_cap=2 * g + m)
    norm = Q(1)
    for a, i in ins:
        norm *= q_norm(st, a, i)
    return InvariantRecord(st.m1, st.m2, ins, g, d, poly.coeff(2 * g + m) / norm)
