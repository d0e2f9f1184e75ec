"""Optional on-disk memo of M_a series, enabled by the GW_CACHE_DIR variable.

File format (plain text, one file per structure and sector)::

    orbifold-gw-mseries 1
    structure <m1> <m2>
    sector <a>
    order <N>
    offset <p/q>
    <i> <j> <n> <s-exp>:<p/q> <s-exp>:<p/q> ...     (one line per nonzero coefficient)

A file is only used when its order covers the request; a larger
computation overwrites it.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Optional

from .exact import LaurentPoly, MatSeries, PuiseuxSeries, Q, format_rational

MAGIC = "orbifold-gw-mseries 1"


def cache_dir() -> Optional[Path]:
    d = os.environ.get("GW_CACHE_DIR")
    return Path(d) if d else None


def _path(st, a: int) -> Optional[Path]:
    d = cache_dir()
    if d is None:
        return None
    return d / f"M_{st.m1}_{st.m2}_{a}.txt"


def dumps(st, a: int, M: MatSeries) -> str:
    order = M.entries[0][0].order
    offset = M.entries[0][0].offset
    lines = [MAGIC, f"structure {st.m1} {st.m2}", f"sector {a}", f"order {order}",
             f"offset {format_rational(offset)}"]
    for i, row in enumerate(M.entries):
        for j, x in enumerate(row):
            for n, c in enumerate(x.coeffs):
                if c:
                    terms = " ".join(f"{e}:{format_rational(v)}" for e, v in sorted(c.items()))
                    lines.append(f"{i + 1} {j + 1} {n} {terms}")
    return "\n".join(lines) + "\n"


def loads(text: str, st, a: int) -> MatSeries:
    lines = text.splitlines()
    if not lines or lines[0] != MAGIC:
        raise ValueError("not an M-series cache file")
    header = dict(line.split(" ", 1) for line in lines[1:5])
    if header["structure"].split() != [str(st.m1), str(st.m2)] or int(header["sector"]) != a:
        raise ValueError("cache file belongs to another structure or sector")
    order = int(header["order"])
    offset = Q(header["offset"])
    l = st.l
    data = [[[dict() for _ in range(order)] for _ in range(l)] for _ in range(l)]
    for line in lines[5:]:
        parts = line.split()
        i, j, n = int(parts[0]), int(parts[1]), int(parts[2])
        for t in parts[3:]:
            e, v = t.split(":")
            data[i - 1][j - 1][n][int(e)] = Q(v)
    return MatSeries([[PuiseuxSeries(offset, [LaurentPoly(d, "s") for d in cell], exact=False, cvar="s")
                       for cell in row] for row in data])


def load(st, a: int, order: int) -> Optional[MatSeries]:
    p = _path(st, a)
    if p is None or not p.exists():
        return None
    try:
        M = loads(p.read_text(), st, a)
    except (ValueError, KeyError, IndexError):
        return None
    return M if M.entries[0][0].order >= order else None


def store(st, a: int, M: MatSeries) -> None:
    p = _path(st, a)
    if p is None:
        return
    p.parent.mkdir(parents=True, exist_ok=True)
    old = load(st, a, 0)
    if old is not None and old.entries[0][0].order >= M.entries[0][0].order:
        return
    # write then rename so concurrent readers never see a partial file
    fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=p.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(dumps(st, a, M))
    os.replace(tmp, p)
