"""Structure data of the orbifold line with isotropy orders (m1, m2).

Matrices are lists of rows, indexed from 0 internally; the helpers taking
``i, j`` use the 1-based labels of the math.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

from .exact import ONE, ZERO, LaurentPoly, MatSeries, PuiseuxSeries, Q, Rational

ConstMatrix = List[List[Rational]]


def _zeros(n: int) -> ConstMatrix:
    return [[ZERO] * n for _ in range(n)]


def _unit(n: int, entries) -> ConstMatrix:
    """Matrix with the given ((i, j), value) pairs, 1-based."""
    m = _zeros(n)
    for (i, j), v in entries:
        m[i - 1][j - 1] += Q(v)
    return m


@dataclass(frozen=True)
class OrbifoldStructure:
    m1: int
    m2: int
    l: int = field(init=False)
    rho: Rational = field(init=False)
    q: Tuple[Rational, ...] = field(init=False)

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("isotropy orders must be positive")
        l = self.m1 + self.m2
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "rho", Q(self.m1 * self.m2, l))
        q = tuple(Q(a, self.m1) if a <= self.m1 else Q(l - a, self.m2) for a in range(l))
        object.__setattr__(self, "q", q)

    @property
    def key(self) -> str:
        return f"{self.m1},{self.m2}"

    def sectors(self) -> range:
        return range(1, self.l)

    def check_sector(self, a: int) -> None:
        if not 1 <= a <= self.l - 1:
            raise ValueError(f"sector {a} outside 1..{self.l - 1}")

    def weight(self, a: int) -> int:
        """Sector weight entering q_{a,i}."""
        if a < self.m1:
            return self.m1
        if a == self.m1:
            return 1
        return self.m2

    def q_norm(self, a: int, i: int) -> Rational:
        """(q_a)_{i+1} times the sector weight (rising factorial)."""
        out = Q(self.weight(a))
        for t in range(i + 1):
            out *= self.q[a] + t
        return out

    def K(self, a: int) -> ConstMatrix:
        """Leading coefficient of M_a."""
        self.check_sector(a)
        m1, l = self.m1, self.l
        if a <= m1:
            return _unit(l, (((j, m1 - a + j), 1) for j in range(1, a + 1)))
        return _unit(l, (((a + j, m1 + j), -1) for j in range(1, l - a + 1)))

    def eta1(self) -> ConstMatrix:
        l = self.l
        return _unit(l, (((i, l + 1 - i), 1) for i in range(1, l + 1)))

    def eta2(self) -> ConstMatrix:
        m1, m2, l = self.m1, self.m2, self.l
        pairs = [((i, m2 + i), 1) for i in range(1, m1 + 1)]
        # the second block is shifted by m1 so the matrix is a signed permutation;
        # with this choice s^2 η^-1 (W^-1)^T η is W of the swapped structure
        pairs += [((i, i - m1), -1) for i in range(m1 + 1, l + 1)]
        return _unit(l, pairs)

    def W_parts(self, s0=None):
        """(E, W0) with W(z, s) = z*E + W0; W0 has LaurentPoly entries in s unless s0 is given."""
        m1, l = self.m1, self.l
        E = _unit(l, [((1, m1), 1)])
        if s0 is None:
            s = LaurentPoly.monomial(1, 1, "s")
            zero = LaurentPoly({}, "s")
            W0 = [[zero] * l for _ in range(l)]
            W0[0][m1 - 1] = W0[0][m1 - 1] + Q(-1, 2)
            W0[0][l - 1] = W0[0][l - 1] - s
            for i in range(2, l + 1):
                W0[i - 1][i - 2] = W0[i - 1][i - 2] + s
            return E, W0
        s0 = Q(s0)
        W0 = _unit(l, [((1, m1), Q(-1, 2)), ((1, l), -s0)] + [((i, i - 1), s0) for i in range(2, l + 1)])
        return E, W0

    def W(self) -> MatSeries:
        """W(z, s) as an exact matrix series in z with s-polynomial coefficients."""
        E, W0 = self.W_parts()
        l = self.l
        rows = []
        for i in range(l):
            row = []
            for j in range(l):
                coeffs = [LaurentPoly.constant(E[i][j], "s"), W0[i][j]]
                row.append(PuiseuxSeries(1, coeffs, exact=True, cvar="s"))
            rows.append(row)
        return MatSeries(rows)

    def swapped(self) -> "OrbifoldStructure":
        return build_structure(self.m2, self.m1)

    def degree_from_dimension(self, g: int, insertions) -> Optional[Rational]:
        """d solving 2g - 2 + d/rho + k = Σ i + Σ q_a (may be non-integral or negative)."""
        k = 0
        total = ZERO
        for a, i in insertions:
            k += 1
            total += i + self.q[a]
        return (total - (2 * g - 2 + k)) * self.rho


@lru_cache(maxsize=None)
def build_structure(m1: int, m2: int) -> OrbifoldStructure:
    return OrbifoldStructure(m1, m2)


def degree_from_dimension(st: OrbifoldStructure, g: int, insertions) -> Optional[int]:
    """Degree forced by the dimension constraint, or None if the invariant vanishes."""
    d = st.degree_from_dimension(g, insertions)
    if d.denominator != 1 or d < 0:
        return None
    return int(d)


def q_norm(st: OrbifoldStructure, a: int, i: int) -> Rational:
    return st.q_norm(a, i)
