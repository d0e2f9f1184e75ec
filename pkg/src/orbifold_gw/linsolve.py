"""Order-by-order linear solve of the difference equation at a numeric s = s0.

Independent of the closed forms: writes M = z^β Σ_n M_n z^(-n) with unknown
rational matrices, collects every power of z of M(z-1)W - WM into one sparse
linear system over Q, fixes M_0 = K_a, and row-reduces.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .exact import ONE, ZERO, LaurentPoly, MatSeries, PuiseuxSeries, Q, Rational, binom_rational
from .structure import OrbifoldStructure

Row = Dict[int, Rational]


class InsufficientBuffer(ArithmeticError):
    """Some requested coefficient is not yet determined by the truncated system."""


class InconsistentSystem(ArithmeticError):
    pass


class SparseRREF:
    """Incremental Gauss-Jordan elimination on sparse rows ``{col: value}`` with a right-hand side."""

    def __init__(self):
        self.pivots: Dict[int, Tuple[Row, Rational]] = {}

    def _reduce(self, row: Row, rhs: Rational) -> Tuple[Row, Rational]:
        row = dict(row)
        # repeatedly eliminate the smallest column that has a pivot
        while True:
            hit = [c for c in row if c in self.pivots]
            if not hit:
                return row, rhs
            c = min(hit)
            prow, prhs = self.pivots[c]
            f = row[c]
            for k, v in prow.items():
                t = row.get(k, ZERO) - f * v
                if t:
                    row[k] = t
                else:
                    row.pop(k, None)
            rhs -= f * prhs

    def add(self, row: Row, rhs) -> None:
        row, rhs = self._reduce({c: Q(v) for c, v in row.items() if v}, Q(rhs))
        if not row:
            if rhs:
                raise InconsistentSystem("equation 0 = nonzero")
            return
        c = min(row)
        f = row[c]
        row = {k: v / f for k, v in row.items()}
        rhs = rhs / f
        # keep existing pivot rows free of the new pivot column
        for pc, (prow, prhs) in list(self.pivots.items()):
            g = prow.get(c)
            if g:
                nrow = dict(prow)
                for k, v in row.items():
                    t = nrow.get(k, ZERO) - g * v
                    if t:
                        nrow[k] = t
                    else:
                        nrow.pop(k, None)
                self.pivots[pc] = (nrow, prhs - g * rhs)
        self.pivots[c] = (row, rhs)

    def value(self, col: int) -> Optional[Rational]:
        """Value of ``col`` if the system pins it, else None."""
        p = self.pivots.get(col)
        if p is None:
            return None
        row, rhs = p
        if len(row) != 1:
            return None
        return rhs


def _equations(st: OrbifoldStructure, a: int, T: int, s0: Rational):
    """Yield (row, rhs) for z-powers 0..T-1 below the leading one; unknowns M_1..M_{T-1}."""
    l = st.l
    E, W0 = st.W_parts(s0)
    K = st.K(a)
    beta = 1 - st.q[a]

    def var(n, i, j):
        return (n - 1) * l * l + i * l + j

    # c[n][k] = binom(beta-n, k) (-1)^k
    c = [[binom_rational(beta - n, k) * (-1) ** k for k in range(T + 1)] for n in range(T + 1)]
    E_nz = [(i, j, E[i][j]) for i in range(l) for j in range(l) if E[i][j]]
    W_nz = [(i, j, W0[i][j]) for i in range(l) for j in range(l) if W0[i][j]]

    for Tp in range(T):
        # per output entry (r, t): linear form over unknowns plus constant from M_0
        forms: Dict[Tuple[int, int], Row] = {}
        const: Dict[Tuple[int, int], Rational] = {}

        def add(r, t, n, i, j, coef):
            if not coef:
                return
            if n == 0:
                v = K[i][j]
                if v:
                    const[(r, t)] = const.get((r, t), ZERO) + coef * v
                return
            d = forms.setdefault((r, t), {})
            k = var(n, i, j)
            d[k] = d.get(k, ZERO) + coef

        # Σ_{n+k=Tp} c M_n E
        for n in range(Tp + 1):
            w = c[n][Tp - n]
            if not w:
                continue
            for (p, t, e) in E_nz:
                for r in range(l):
                    add(r, t, n, r, p, w * e)
        # - E M_Tp
        for (r, p, e) in E_nz:
            for t in range(l):
                add(r, t, Tp, p, t, -e)
        if Tp >= 1:
            for n in range(Tp):
                w = c[n][Tp - 1 - n]
                if not w:
                    continue
                for (p, t, e) in W_nz:
                    for r in range(l):
                        add(r, t, n, r, p, w * e)
            for (r, p, e) in W_nz:
                for t in range(l):
                    add(r, t, Tp - 1, p, t, -e)
        for key in set(forms) | set(const):
            row = {k: v for k, v in forms.get(key, {}).items() if v}
            yield row, -const.get(key, ZERO)


def solve_tde_linear(st: OrbifoldStructure, a: int, order: int, s0, buffer: Optional[int] = None,
                     max_buffer: int = 256) -> MatSeries:
    """M_a at s = s0 to ``order`` terms, as a matrix series with constant coefficients."""
    st.check_sector(a)
    s0 = Q(s0)
    if not s0:
        raise ValueError("s0 must be nonzero")
    B = buffer if buffer is not None else 2 * st.m1
    while True:
        try:
            return _solve_with_buffer(st, a, order, s0, B)
        except InsufficientBuffer:
            if B >= max_buffer:
                raise
            B *= 2


def _solve_with_buffer(st, a, order, s0, B) -> MatSeries:
    l = st.l
    T = order + B
    sys = SparseRREF()
    for row, rhs in _equations(st, a, T, s0):
        sys.add(row, rhs)
    K = st.K(a)
    coeffs = [[[K[i][j]] for j in range(l)] for i in range(l)]
    for n in range(1, order):
        for i in range(l):
            for j in range(l):
                v = sys.value((n - 1) * l * l + i * l + j)
                if v is None:
                    raise InsufficientBuffer(f"coefficient n={n} ({i + 1},{j + 1}) not pinned with buffer {B}")
                coeffs[i][j].append(v)
    beta = 1 - st.q[a]
    return MatSeries([[PuiseuxSeries(beta, [LaurentPoly.constant(v, "s") for v in coeffs[i][j]], exact=False, cvar="s")
                       for j in range(l)] for i in range(l)])


def specialize(M: MatSeries, s0) -> MatSeries:
    """Evaluate the s-polynomial coefficients at s = s0."""
    s0 = Q(s0)
    return M.map(lambda x: x.map_coeffs(lambda c: LaurentPoly.constant(c.evaluate(s0), "s")))
