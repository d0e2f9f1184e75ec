"""Generalized Bernoulli polynomials.

B_m(l, x) is m! times the coefficient of t^m in (t/(e^t - 1))^l e^(x t).
The exponent l may be any rational number.
"""
from __future__ import annotations

import math
import threading
from typing import Dict, List

from .exact import ONE, ZERO, Q, Rational, binom_rational


class BernoulliCache:
    """Rows of B_k(l, 0), k = 0..K, memoized per exponent l.

    A row is grown by recomputing to twice the requested length, so repeated
    requests with slowly increasing k stay cheap.
    """

    def __init__(self):
        self._rows: Dict[Rational, List[Rational]] = {}
        self._lock = threading.Lock()

    @property
    def max_order(self) -> int:
        return max((len(r) - 1 for r in self._rows.values()), default=-1)

    def row(self, ell, K: int) -> List[Rational]:
        """[B_0(l,0), ..., B_K(l,0)]."""
        ell = Q(ell)
        r = self._rows.get(ell)
        if r is None or len(r) <= K:
            length = max(K + 1, 2 * len(r) if r else 8)
            r = _power_row(ell, length - 1)
            with self._lock:
                self._rows[ell] = r
        return r[: K + 1]

    def clear(self) -> None:
        with self._lock:
            self._rows.clear()


_DEFAULT = BernoulliCache()


def _td_series(K: int) -> List[Rational]:
    """Taylor coefficients of t/(e^t - 1) up to t^K, from the reciprocal of (e^t-1)/t."""
    d = [ONE / math.factorial(n + 1) for n in range(K + 1)]
    inv = [ONE]
    for n in range(1, K + 1):
        inv.append(-sum((d[k] * inv[n - k] for k in range(1, n + 1)), ZERO))
    return inv


def _power_row(ell: Rational, K: int) -> List[Rational]:
    """m! [t^m] (t/(e^t-1))^l for m <= K via the binomial series of (1+u)^l."""
    u = _td_series(K)
    u[0] = ZERO
    out = [ZERO] * (K + 1)
    out[0] = ONE
    upow = [ONE] + [ZERO] * K
    for j in range(1, K + 1):
        # u has no constant term, so u^j starts at t^j
        nxt = [ZERO] * (K + 1)
        for a in range(j - 1, K + 1):
            if not upow[a]:
                continue
            for b in range(1, K + 1 - a):
                if u[b]:
                    nxt[a + b] += upow[a] * u[b]
        upow = nxt
        c = binom_rational(ell, j)
        if c:
            for m in range(j, K + 1):
                out[m] += c * upow[m]
    return [v * math.factorial(m) for m, v in enumerate(out)]


def bernoulli_row(ell, K: int, cache: BernoulliCache = _DEFAULT) -> List[Rational]:
    """B_k(l, 0) for k = 0..K."""
    return cache.row(ell, K)


def gen_bernoulli(m: int, ell, x, cache: BernoulliCache = _DEFAULT) -> Rational:
    """B_m(l, x) = Σ_j C(m, j) B_j(l, 0) x^(m-j)."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    x = Q(x)
    row = cache.row(ell, m)
    total = ZERO
    c = ONE
    xp = ONE
    # accumulate from j = m downward so the power of x grows with the loop
    for j in range(m, -1, -1):
        total += c * row[j] * xp
        c = c * j / (m - j + 1)
        xp *= x
    return total


def bernoulli_number(m: int) -> Rational:
    return gen_bernoulli(m, 1, 0)


def euler_maclaurin_coeffs(K: int) -> List[Rational]:
    """c_k with D/(1 - e^(-D)) = Σ c_k D^k."""
    return [gen_bernoulli(k, 1, 1) / math.factorial(k) for k in range(K + 1)]
