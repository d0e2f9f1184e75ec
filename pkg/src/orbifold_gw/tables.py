"""Grids of <τ_i(φ_a)^k>_{g,d} over k and g, and their serializations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .correlators import RFamily, two_point_coeff
from .exact import ZERO, Q, Rational, TruncationError, format_rational
from .onepoint import one_point_values_operator
from .structure import OrbifoldStructure, build_structure, degree_from_dimension

TRUNC = "TRUNC"
Cell = Union[Rational, str]


@dataclass
class TableResult:
    m1: int
    m2: int
    a: int
    i: int
    ks: List[int]
    gs: List[int]
    cells: Dict[Tuple[int, int], Cell] = field(default_factory=dict)
    table_id: Optional[str] = None

    @property
    def truncated(self) -> bool:
        return any(v == TRUNC for v in self.cells.values())

    def degree(self, k: int, g: int) -> Optional[int]:
        st = build_structure(self.m1, self.m2)
        return degree_from_dimension(st, g, [(self.a, self.i)] * k)


def table_order(i: int, kmax: int) -> int:
    """λ-order budget for all cells with k <= kmax (two distinguished τ_i plus k-2 fixed ones)."""
    return 2 * i + 3 + max(kmax - 2, 0) * (i + 1) + 2


def compute_table(st: OrbifoldStructure, a: int, i: int, ks: Sequence[int], gs: Sequence[int],
                  order: Optional[int] = None, table_id: Optional[str] = None) -> TableResult:
    """Every cell (k, g); cells beyond an explicit ``order`` budget are marked TRUNC."""
    st.check_sector(a)
    ks, gs = sorted(ks), sorted(gs)
    res = TableResult(st.m1, st.m2, a, i, list(ks), list(gs), table_id=table_id)
    if not ks:
        return res
    qn = st.q_norm(a, i)
    if 1 in ks:
        vals = one_point_values_operator(st, a, i)
        for g in gs:
            res.cells[(1, g)] = vals.get((i, g), Q(0))
    multi = [k for k in ks if k >= 2]
    if not multi:
        return res
    kmax = max(multi)
    cap = 2 * max(gs) + kmax - 2
    N = order if order is not None else table_order(i, kmax)
    while True:
        fam = RFamily(st, [(a, i)], N, cap)
        failed = False
        for k in multi:
            m = k - 2
            try:
                poly = two_point_coeff(st, fam, a, a, (m,), -i - 1, -i - 1, cap)
            except TruncationError:
                if order is None:
                    failed = True
                    break
                for g in gs:
                    # cells ruled out by the dimension constraint are zero without computation
                    res.cells[(k, g)] = ZERO if res.degree(k, g) is None else TRUNC
                continue
            for g in gs:
                res.cells[(k, g)] = poly.coeff(2 * g + m) / qn ** k
        if not failed:
            return res
        N += 4


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _cell_text(v: Cell) -> str:
    return v if isinstance(v, str) else format_rational(v)


def to_csv(res: TableResult) -> str:
    lines = ["k,g,d,value"]
    for k in res.ks:
        for g in res.gs:
            d = res.degree(k, g)
            lines.append(f"{k},{g},{'' if d is None else d},{_cell_text(res.cells[(k, g)])}")
    return "\n".join(lines) + "\n"


def to_json(res: TableResult) -> str:
    """Schema: {"table", "m1", "m2", "sector", "level", "cells": [{"k", "g", "d", "value"}]}.

    ``value`` is {"num": str, "den": str} or the string "TRUNC"; ``d`` is null when
    the dimension constraint has no nonnegative integer solution.
    """
    cells = []
    for k in res.ks:
        for g in res.gs:
            v = res.cells[(k, g)]
            val = v if isinstance(v, str) else {"num": str(v.numerator), "den": str(v.denominator)}
            cells.append({"k": k, "g": g, "d": res.degree(k, g), "value": val})
    obj = {"table": res.table_id, "m1": res.m1, "m2": res.m2, "sector": res.a, "level": res.i, "cells": cells}
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> TableResult:
    obj = json.loads(text)
    cells = {}
    for c in obj["cells"]:
        v = c["value"]
        cells[(c["k"], c["g"])] = v if isinstance(v, str) else Q(int(v["num"]), int(v["den"]))
    ks = sorted({k for k, _ in cells})
    gs = sorted({g for _, g in cells})
    return TableResult(obj["m1"], obj["m2"], obj["sector"], obj["level"], ks, gs, cells, obj["table"])


def to_markdown(res: TableResult) -> str:
    title = res.table_id or f"P{res.m1}{res.m2} tau_{res.i}(phi_{res.a})^k"
    head = "| k | " + " | ".join(f"g={g}" for g in res.gs) + " |"
    sep = "|---|" + "---|" * len(res.gs)
    rows = [f"| {k} | " + " | ".join(_cell_text(res.cells[(k, g)]) for g in res.gs) + " |" for k in res.ks]
    return f"### {title}\n\n" + "\n".join([head, sep] + rows) + "\n"


FORMATTERS = {"csv": to_csv, "json": to_json, "md": to_markdown}
