"""Golden dataset of reference invariants, shipped as a text file."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .exact import Q, Rational
from .structure import build_structure


@dataclass(frozen=True)
class GoldenTable:
    id: str
    m1: int
    m2: int
    a: int
    i: int
    cells: Dict[Tuple[int, int], Rational] = field(hash=False, compare=False)
    # (k, g) -> recomputed value for cells recorded with a transcription error
    errata: Dict[Tuple[int, int], Rational] = field(default_factory=dict, hash=False, compare=False)

    def expected(self, k: int, g: int) -> Rational:
        """The recorded value, or its correction when the cell is a known erratum."""
        return self.errata.get((k, g), self.cells[(k, g)])

    @property
    def ks(self) -> List[int]:
        return sorted({k for k, _ in self.cells})

    @property
    def gs(self) -> List[int]:
        return sorted({g for _, g in self.cells})

    def degree(self, k: int, g: int) -> Rational:
        """Degree rule d(k, g) = ρ (k (i + q_a - 1) + 2 - 2g); may be non-integral."""
        st = build_structure(self.m1, self.m2)
        return st.degree_from_dimension(g, [(self.a, self.i)] * k)


def parse_golden(text: str) -> Dict[str, GoldenTable]:
    heads: Dict[str, Tuple[int, int, int, int]] = {}
    cells: Dict[str, Dict[Tuple[int, int], Rational]] = {}
    errata: Dict[str, Dict[Tuple[int, int], Rational]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "table":
            tid = parts[1]
            heads[tid] = tuple(int(x) for x in parts[2:6])
            cells[tid] = {}
            errata[tid] = {}
        elif parts[0] == "erratum":
            _, tid, k, g, v = parts
            if (int(k), int(g)) not in cells[tid]:
                raise ValueError(f"erratum for a cell not in {tid}: {line}")
            errata[tid][(int(k), int(g))] = Q(v)
        else:
            tid, k, g, v = parts
            cells[tid][(int(k), int(g))] = Q(v)
    return {tid: GoldenTable(tid, *heads[tid], cells=cells[tid], errata=errata[tid]) for tid in heads}


@lru_cache(maxsize=1)
def golden_tables() -> Dict[str, GoldenTable]:
    text = resources.files("orbifold_gw").joinpath("data/golden_tables.txt").read_text()
    return parse_golden(text)


def golden_table(tid: str) -> GoldenTable:
    tables = golden_tables()
    if tid not in tables:
        raise KeyError(f"unknown table id {tid!r}; known: {', '.join(sorted(tables))}")
    return tables[tid]


# Primary (descendant level 0) invariants <τ_0(φ_a)^k>_{g,d} listed for three structures.
# Entries are (m1, m2, a, k, g, d, value, note).
PRIMARY_LISTS: List[Tuple[int, int, int, int, int, int, str, str]] = [
    (2, 1, 1, 1, 0, 1, "1", "recorded with d=2; the dimension constraint forces d=1"),
    (2, 1, 1, 4, 0, 0, "-1/4", ""),
    (2, 1, 2, 1, 1, 0, "-1/24", ""),
    (3, 1, 1, 1, 0, 1, "1", ""),
    (3, 1, 1, 3, 0, 0, "1/3", ""),
    (3, 1, 2, 2, 0, 1, "1/3", ""),
    (3, 1, 2, 6, 0, 0, "-1/27", ""),
    (3, 1, 3, 1, 1, 0, "-1/24", ""),
    # the two recorded tuples (1,3,0,0) and (2,2,0,1) violate the dimension constraint;
    # the value sits at k = 4 for a = 1 and, by the φ_1 <-> φ_3 symmetry, for a = 3
    (2, 2, 1, 4, 0, 0, "-1/4", "recorded as (a,k,g,d)=(1,3,0,0)"),
    (2, 2, 3, 4, 0, 0, "-1/4", "recorded as (a,k,g,d)=(2,2,0,1)"),
    (2, 2, 2, 1, 1, 0, "-1/24", ""),
] + [(2, 2, 2, k, 0, 2, str(2 ** (k - 1)), "family 2^(k-1), conjectural") for k in range(1, 9)]
