"""Exact scalars, Laurent polynomials, truncated Puiseux series and matrix series.

Every object here is immutable.  A truncated series records how far it is
known; asking for a coefficient past that point raises
:class:`TruncationError` instead of returning zero.

Series convention: a :class:`PuiseuxSeries` with ``offset`` β and
coefficients ``c[0..N-1]`` stands for ``Σ_n c[n] z^(β-n) + O(z^(β-N))``.
Coefficients are :class:`LaurentPoly` objects in a second variable
(``s`` for the difference equation, ``ε`` for the correlator series).
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

Rational = type(mpq(0))
Scalar = Union[int, "Rational"]

ZERO = mpq(0)
ONE = mpq(1)


class TruncationError(ArithmeticError):
    """A coefficient was requested beyond the known order of a series."""


class OffsetGridError(ValueError):
    """Two series whose offsets do not differ by an integer were combined."""


def Q(x, den=None) -> Rational:
    """Coerce ``x`` (int, str, Fraction, mpq) to an exact rational."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, str):
        return mpq(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


def format_rational(x) -> str:
    """``p/q`` with integers printed bare."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_integer(x) -> bool:
    return Q(x).denominator == 1


def binom_rational(alpha, n: int) -> Rational:
    """Generalized binomial coefficient alpha(alpha-1)...(alpha-n+1)/n!."""
    if n < 0:
        return ZERO
    alpha = Q(alpha)
    num = ONE
    for k in range(n):
        num *= alpha - k
    return num / math.factorial(n)


def falling_factorial(x, k: int) -> Rational:
    x = Q(x)
    out = ONE
    for j in range(k):
        out *= x - j
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Finite Laurent polynomial with rational coefficients in one variable."""

    __slots__ = ("var", "_c")

    def __init__(self, coeffs: Optional[Mapping[int, Scalar]] = None, var: str = "s"):
        self.var = var
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Q(v)
                if v:
                    c[int(e)] = v
        self._c = c

    @classmethod
    def _raw(cls, c: Dict[int, Rational], var: str) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.var = var
        obj._c = c
        return obj

    @classmethod
    def constant(cls, v: Scalar, var: str = "s") -> "LaurentPoly":
        v = Q(v)
        return cls._raw({0: v} if v else {}, var)

    @classmethod
    def monomial(cls, e: int, v: Scalar = 1, var: str = "s") -> "LaurentPoly":
        v = Q(v)
        return cls._raw({int(e): v} if v else {}, var)

    @property
    def coeffs(self) -> Dict[int, Rational]:
        return dict(self._c)

    def items(self) -> Iterable[Tuple[int, Rational]]:
        return self._c.items()

    def coeff(self, e: int) -> Rational:
        return self._c.get(e, ZERO)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def degree(self) -> Optional[int]:
        return max(self._c) if self._c else None

    def min_degree(self) -> Optional[int]:
        return min(self._c) if self._c else None

    def _var_with(self, other: "LaurentPoly") -> str:
        if self.var != other.var and self._c and other._c:
            if set(self._c) != {0} and set(other._c) != {0}:
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
        return self.var if (self._c and set(self._c) != {0}) else other.var

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.var)
        var = self._var_with(other)
        c = dict(self._c)
        for e, v in other._c.items():
            t = c.get(e, ZERO) + v
            if t:
                c[e] = t
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c, var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()}, self.var)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: Scalar) -> "LaurentPoly":
        k = Q(k)
        if not k:
            return LaurentPoly._raw({}, self.var)
        return LaurentPoly._raw({e: v * k for e, v in self._c.items()}, self.var)

    def mul(self, other: "LaurentPoly", cap: Optional[int] = None) -> "LaurentPoly":
        """Product, dropping exponents above ``cap`` when given."""
        var = self._var_with(other)
        c: Dict[int, Rational] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                if cap is not None and e > cap:
                    continue
                c[e] = c.get(e, ZERO) + v1 * v2
        return LaurentPoly._raw({e: v for e, v in c.items() if v}, var)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        out = LaurentPoly.constant(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by var**k."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()}, self.var)

    def reflect(self, var: Optional[str] = None) -> "LaurentPoly":
        """Substitute var -> 1/var'."""
        return LaurentPoly._raw({-e: v for e, v in self._c.items()}, var or self.var)

    def negate_var(self) -> "LaurentPoly":
        """Substitute var -> -var."""
        return LaurentPoly._raw({e: (-v if e % 2 else v) for e, v in self._c.items()}, self.var)

    def truncate_above(self, cap: int) -> "LaurentPoly":
        return LaurentPoly._raw({e: v for e, v in self._c.items() if e <= cap}, self.var)

    def evaluate(self, x: Scalar) -> Rational:
        x = Q(x)
        return sum((v * x ** e for e, v in self._c.items()), ZERO)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
            return self._c == ({0: Q(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = format_rational(self._c[e])
            parts.append(v if e == 0 else f"{v}*{self.var}^{e}")
        return " + ".join(parts)


def _zero_poly(var: str) -> LaurentPoly:
    return LaurentPoly._raw({}, var)


# ---------------------------------------------------------------------------
# Truncated Puiseux series
# ---------------------------------------------------------------------------

class PuiseuxSeries:
    """``Σ_n c[n] z^(offset-n)``, truncated after ``order`` terms unless exact."""

    __slots__ = ("offset", "coeffs", "exact", "cvar")

    def __init__(self, offset, coeffs: Sequence, exact: bool = False, cvar: str = "s"):
        self.offset = Q(offset)
        cs = []
        for c in coeffs:
            if not isinstance(c, LaurentPoly):
                c = LaurentPoly.constant(c, cvar)
            cs.append(c)
        self.coeffs: Tuple[LaurentPoly, ...] = tuple(cs)
        self.exact = exact
        self.cvar = cvar

    @classmethod
    def _raw(cls, offset, coeffs, exact, cvar) -> "PuiseuxSeries":
        obj = object.__new__(cls)
        obj.offset = offset
        obj.coeffs = coeffs
        obj.exact = exact
        obj.cvar = cvar
        return obj

    @classmethod
    def zero(cls, offset, order: int, cvar: str = "s") -> "PuiseuxSeries":
        z = _zero_poly(cvar)
        return cls._raw(Q(offset), (z,) * order, False, cvar)

    @classmethod
    def monomial(cls, exponent, coeff=1, order: Optional[int] = None, cvar: str = "s") -> "PuiseuxSeries":
        """``coeff * z^exponent``; exact unless ``order`` is given."""
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.constant(coeff, cvar)
        if order is None:
            return cls._raw(Q(exponent), (c,), True, cvar)
        z = _zero_poly(cvar)
        return cls._raw(Q(exponent), (c,) + (z,) * (order - 1), False, cvar)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def precision(self):
        """Exponent of the first unknown term (``-inf`` for exact series)."""
        return -math.inf if self.exact else self.offset - len(self.coeffs)

    def _check_grid(self, other: "PuiseuxSeries") -> None:
        if (self.offset - other.offset).denominator != 1:
            raise OffsetGridError(f"offsets {self.offset} and {other.offset} are not on one grid")

    def coeff(self, e) -> LaurentPoly:
        """Exact coefficient of ``z^e``."""
        e = Q(e)
        n = self.offset - e
        if n.denominator != 1:
            raise OffsetGridError(f"exponent {e} is off the grid of offset {self.offset}")
        n = int(n)
        if n < 0:
            return _zero_poly(self.cvar)
        if n >= len(self.coeffs):
            if self.exact:
                return _zero_poly(self.cvar)
            raise TruncationError(
                f"coefficient of z^{e} requested but series is known only above z^{self.precision}")
        return self.coeffs[n]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def with_offset(self, offset) -> "PuiseuxSeries":
        """Re-anchor on a higher offset of the same grid (pads leading zeros)."""
        offset = Q(offset)
        d = offset - self.offset
        if d.denominator != 1 or d < 0:
            raise OffsetGridError(f"cannot move offset {self.offset} to {offset}")
        z = _zero_poly(self.cvar)
        return PuiseuxSeries._raw(offset, (z,) * int(d) + self.coeffs, self.exact, self.cvar)

    def truncate(self, order: int) -> "PuiseuxSeries":
        """Keep ``order`` terms (an exact series becomes truncated)."""
        cs = self.coeffs[:order]
        if len(cs) < order:
            if not self.exact:
                raise TruncationError(f"cannot extend a series of order {self.order} to {order}")
            cs = cs + (_zero_poly(self.cvar),) * (order - len(cs))
        return PuiseuxSeries._raw(self.offset, cs, False, self.cvar)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return series_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return series_add(self, other.__neg__())

    def __neg__(self):
        return PuiseuxSeries._raw(self.offset, tuple(-c for c in self.coeffs), self.exact, self.cvar)

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, k) -> "PuiseuxSeries":
        if isinstance(k, LaurentPoly):
            return self.map_coeffs(lambda c: c * k)
        k = Q(k)
        return PuiseuxSeries._raw(self.offset, tuple(c.scale(k) for c in self.coeffs), self.exact, self.cvar)

    def map_coeffs(self, fn) -> "PuiseuxSeries":
        return PuiseuxSeries._raw(self.offset, tuple(fn(c) for c in self.coeffs), self.exact, self.cvar)

    def mul_z(self, k) -> "PuiseuxSeries":
        """Multiply by z^k."""
        return PuiseuxSeries._raw(self.offset + Q(k), self.coeffs, self.exact, self.cvar)

    def derivative(self) -> "PuiseuxSeries":
        """d/dz, keeping the grid anchored at offset-1."""
        cs = tuple(c.scale(self.offset - n) for n, c in enumerate(self.coeffs))
        return PuiseuxSeries._raw(self.offset - 1, cs, self.exact, self.cvar)

    def positive_part(self) -> "PuiseuxSeries":
        """Terms with nonnegative exponent; the result is an exact polynomial."""
        if self.offset.denominator != 1:
            raise OffsetGridError("positive part needs an integer grid")
        top = int(self.offset)
        if top < 0:
            return PuiseuxSeries._raw(ZERO, (_zero_poly(self.cvar),), True, self.cvar)
        if top + 1 > len(self.coeffs) and not self.exact:
            raise TruncationError("positive part needs the series down to z^0")
        cs = self.coeffs[: top + 1]
        cs = cs + (_zero_poly(self.cvar),) * (top + 1 - len(cs))
        return PuiseuxSeries._raw(self.offset, cs, True, self.cvar)

    def terms(self) -> Iterator[Tuple[Rational, LaurentPoly]]:
        for n, c in enumerate(self.coeffs):
            if c:
                yield self.offset - n, c

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return series_equal(self, other)

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"[z^{format_rational(e)}] {c!r}" for e, c in self.terms())
        tail = "" if self.exact else f" + O(z^{format_rational(self.precision)})"
        return f"PuiseuxSeries({body or '0'}{tail})"


def _common_frame(fs: Sequence[PuiseuxSeries]):
    """Offset and order on which all series can be compared or added."""
    for f in fs[1:]:
        fs[0]._check_grid(f)
    offset = max(f.offset for f in fs)
    precs = [f.precision for f in fs]
    prec = max(precs)
    if prec == -math.inf:
        order = max(int(offset - f.offset) + f.order for f in fs)
        return offset, order, True
    return offset, int(offset - prec), False


def series_add(f: PuiseuxSeries, g: PuiseuxSeries) -> PuiseuxSeries:
    offset, order, exact = _common_frame([f, g])
    out = []
    df, dg = int(offset - f.offset), int(offset - g.offset)
    zero = _zero_poly(f.cvar)
    for n in range(order):
        a = f.coeffs[n - df] if 0 <= n - df < f.order else zero
        b = g.coeffs[n - dg] if 0 <= n - dg < g.order else zero
        out.append(a + b if (a and b) else (a or b))
    return PuiseuxSeries._raw(offset, tuple(out), exact, f.cvar)


def series_sum(fs: Sequence[PuiseuxSeries]) -> PuiseuxSeries:
    out = fs[0]
    for f in fs[1:]:
        out = series_add(out, f)
    return out


def series_mul(f: PuiseuxSeries, g: PuiseuxSeries, cap: Optional[int] = None) -> PuiseuxSeries:
    """Cauchy product; ``cap`` drops coefficient-variable exponents above it."""
    offset = f.offset + g.offset
    if f.exact and g.exact:
        order = f.order + g.order - 1
        exact = True
    else:
        prec = max(f.offset + g.precision, g.offset + f.precision)
        order = int(offset - prec)
        exact = False
    acc = [dict() for _ in range(max(order, 0))]
    _conv_into(acc, f.coeffs, g.coeffs, cap)
    var = f.cvar
    return PuiseuxSeries._raw(offset, tuple(LaurentPoly._raw({e: v for e, v in d.items() if v}, var) for d in acc),
                              exact, var)


def _conv_into(acc: List[dict], a: Sequence[LaurentPoly], b: Sequence[LaurentPoly], cap: Optional[int]) -> None:
    """acc[n] += Σ_k a[k]*b[n-k] for n < len(acc), coefficient dicts in place."""
    N = len(acc)
    for k, ak in enumerate(a):
        if k >= N:
            break
        if not ak._c:
            continue
        ai = list(ak._c.items())
        for t in range(min(len(b), N - k)):
            bt = b[t]._c
            if not bt:
                continue
            d = acc[k + t]
            for e1, v1 in ai:
                for e2, v2 in bt.items():
                    e = e1 + e2
                    if cap is not None and e > cap:
                        continue
                    d[e] = d.get(e, ZERO) + v1 * v2


def series_shift_z(f: PuiseuxSeries, c: int) -> PuiseuxSeries:
    """f(z + c) expanded on the same grid, to the same order."""
    c = Q(c)
    if c == 0:
        return f
    if f.exact:
        if f.offset.denominator != 1 or f.offset - f.order + 1 < 0:
            raise TruncationError("exact shift only for polynomials; truncate first")
        order = f.order
    else:
        order = f.order
    acc = [dict() for _ in range(order)]
    for n, fn in enumerate(f.coeffs):
        if not fn._c:
            continue
        beta = f.offset - n
        ck = ONE
        b = ONE
        for k in range(order - n):
            if k:
                b = b * (beta - k + 1) / k
                ck = ck * c
            w = b * ck
            if not w:
                if beta.denominator == 1 and beta >= 0 and k > beta:
                    break
                continue
            d = acc[n + k]
            for e, v in fn._c.items():
                d[e] = d.get(e, ZERO) + v * w
    cs = tuple(LaurentPoly._raw({e: v for e, v in d.items() if v}, f.cvar) for d in acc)
    return PuiseuxSeries._raw(f.offset, cs, f.exact, f.cvar)


def series_coeff(f: PuiseuxSeries, e) -> LaurentPoly:
    return f.coeff(e)


def series_equal(f: PuiseuxSeries, g: PuiseuxSeries, order: Optional[int] = None) -> bool:
    """Coefficient-wise equality on the common known range (or first ``order`` terms of it)."""
    try:
        offset, common, _ = _common_frame([f, g])
    except OffsetGridError:
        return False
    if order is not None:
        common = min(common, order)
    for n in range(common):
        e = offset - n
        if f.coeff(e) != g.coeff(e):
            return False
    return True


# ---------------------------------------------------------------------------
# Matrix series
# ---------------------------------------------------------------------------

class MatSeries:
    """Square matrix of Puiseux series sharing one offset grid and order."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries: Sequence[Sequence[PuiseuxSeries]]):
        rows = tuple(tuple(r) for r in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix series must be square")
        self.dim = n
        self.entries = rows

    @classmethod
    def from_constant(cls, mat: Sequence[Sequence], offset=0, order: Optional[int] = None,
                      cvar: str = "s") -> "MatSeries":
        """Constant matrix times z^offset (exact unless ``order`` given)."""
        return cls([[PuiseuxSeries.monomial(offset, v, order, cvar) for v in row] for row in mat])

    @classmethod
    def identity(cls, n: int, order: Optional[int] = None, cvar: str = "s") -> "MatSeries":
        return cls.from_constant([[1 if i == j else 0 for j in range(n)] for i in range(n)], 0, order, cvar)

    def __getitem__(self, ij) -> PuiseuxSeries:
        i, j = ij
        return self.entries[i][j]

    @property
    def offset(self):
        return max(e.offset for row in self.entries for e in row)

    @property
    def order(self) -> int:
        _, order, _ = _common_frame([e for row in self.entries for e in row])
        return order

    def normalized(self) -> "MatSeries":
        """All entries re-expressed on one offset and order."""
        flat = [e for row in self.entries for e in row]
        offset, order, exact = _common_frame(flat)
        def fix(e):
            e = e.with_offset(offset)
            return e if exact else e.truncate(order)
        return MatSeries([[fix(e) for e in row] for row in self.entries])

    def coefficient_matrix(self, e) -> List[List[LaurentPoly]]:
        return [[x.coeff(e) for x in row] for row in self.entries]

    def map(self, fn) -> "MatSeries":
        return MatSeries([[fn(x) for x in row] for row in self.entries])

    def transpose(self) -> "MatSeries":
        n = self.dim
        return MatSeries([[self.entries[j][i] for j in range(n)] for i in range(n)])

    def __add__(self, other: "MatSeries") -> "MatSeries":
        return mat_add(self, other)

    def __sub__(self, other: "MatSeries") -> "MatSeries":
        return mat_add(self, -other)

    def __neg__(self) -> "MatSeries":
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, MatSeries):
            return mat_mul(self, other)
        return self.map(lambda x: x.scale(other))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def __eq__(self, other):
        if not isinstance(other, MatSeries):
            return NotImplemented
        return mat_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"MatSeries(dim={self.dim}, offset={self.offset}, order={self.order})"


def _check_dims(f: MatSeries, g: MatSeries) -> None:
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")


def mat_add(f: MatSeries, g: MatSeries) -> MatSeries:
    _check_dims(f, g)
    return MatSeries([[series_add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(f.entries, g.entries)])


def mat_mul(f: MatSeries, g: MatSeries, cap: Optional[int] = None) -> MatSeries:
    _check_dims(f, g)
    n = f.dim
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = [(f.entries[i][k], g.entries[k][j]) for k in range(n)]
            row.append(_dot(terms, cap))
        out.append(row)
    return MatSeries(out)


def _dot(pairs: Sequence[Tuple[PuiseuxSeries, PuiseuxSeries]], cap: Optional[int]) -> PuiseuxSeries:
    """Σ a_k b_k computed in a single accumulator."""
    for a, b in pairs[1:]:
        pairs[0][0]._check_grid(a)
        pairs[0][1]._check_grid(b)
    offset = max(a.offset + b.offset for a, b in pairs)
    exact = all(a.exact and b.exact for a, b in pairs)
    if exact:
        order = max(int(offset - a.offset - b.offset) + a.order + b.order - 1 for a, b in pairs)
    else:
        prec = max(max(a.offset + b.precision, b.offset + a.precision) for a, b in pairs)
        order = int(offset - prec)
    acc = [dict() for _ in range(order)]
    for a, b in pairs:
        shift = int(offset - a.offset - b.offset)
        if shift >= order:
            continue
        # the slice shares the dict objects, so accumulation lands in acc
        _conv_into(acc[shift:], a.coeffs, b.coeffs, cap)
    var = pairs[0][0].cvar
    cs = tuple(LaurentPoly._raw({e: v for e, v in d.items() if v}, var) for d in acc)
    return PuiseuxSeries._raw(offset, cs, exact, var)


def mat_trace(f: MatSeries) -> PuiseuxSeries:
    return series_sum([f.entries[i][i] for i in range(f.dim)])


def mat_det(f: MatSeries) -> PuiseuxSeries:
    """Division-free determinant by Laplace expansion with memoized minors."""
    n = f.dim
    # minors[cols] = det of rows 0..len(cols)-1 restricted to columns cols
    minors: Dict[Tuple[int, ...], PuiseuxSeries] = {}
    for j in range(n):
        minors[(j,)] = f.entries[0][j]
    for r in range(1, n):
        nxt = {}
        for cols in combinations(range(n), r + 1):
            terms = []
            for pos, j in enumerate(cols):
                rest = cols[:pos] + cols[pos + 1:]
                sign = -1 if (r + pos) % 2 else 1
                x = f.entries[r][j]
                terms.append((x if sign > 0 else -x, minors[rest]))
            nxt[cols] = _dot(terms, None)
        minors = nxt
    return minors[tuple(range(n))]


def mat_equal(f: MatSeries, g: MatSeries, order: Optional[int] = None) -> bool:
    if f.dim != g.dim:
        return False
    return all(series_equal(a, b, order) for ra, rb in zip(f.entries, g.entries) for a, b in zip(ra, rb))


def mat_scale_poly(f: MatSeries, p: LaurentPoly) -> MatSeries:
    return f.map(lambda x: x.map_coeffs(lambda c: c * p))


def conjugate(f: MatSeries, left: Sequence[Sequence], right: Sequence[Sequence]) -> MatSeries:
    """left · f · right for constant rational matrices ``left`` and ``right``."""
    n = f.dim
    tmp = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = [f.entries[k][j].scale(left[i][k]) for k in range(n) if left[i][k]]
            row.append(series_sum(terms) if terms else f.entries[i][j].scale(0))
        tmp.append(row)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = [tmp[i][k].scale(right[k][j]) for k in range(n) if right[k][j]]
            row.append(series_sum(terms) if terms else tmp[i][j].scale(0))
        out.append(row)
    return MatSeries(out)


def const_matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[List[Rational]]:
    n = len(a)
    return [[sum((Q(a[i][k]) * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


def const_inverse(a: Sequence[Sequence]) -> List[List[Rational]]:
    """Inverse of a small rational matrix by Gauss-Jordan."""
    n = len(a)
    m = [[Q(x) for x in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]
