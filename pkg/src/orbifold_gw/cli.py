"""Command-line front end: ``orbifold-gw {invariant,table,verify,onepoint}``.

Exit codes: 0 success, 1 verification failure, 2 order budget exceeded, 3 bad arguments.
"""
from __future__ import annotations

import argparse
import re
import sys
from typing import List, Optional, Sequence, Tuple

from .correlators import extract_invariant
from .exact import ZERO, TruncationError, format_rational
from .golden import golden_table, golden_tables
from .onepoint import one_point_values_closed, one_point_values_operator
from .structure import build_structure, degree_from_dimension
from .tables import FORMATTERS, compute_table
from .verify import SUITES, run_suite, suite_golden

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_ARGS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


_INS = re.compile(r"^\s*(\d+)\s*:\s*(\d+)\s*(?:\*\s*(\d+))?\s*$")


def parse_insertions(text: str) -> List[Tuple[int, int]]:
    """``"a:i*count,..."`` -> [(a, i), ...]; the count defaults to 1."""
    out = []
    for part in text.split(","):
        m = _INS.match(part)
        if not m:
            raise UsageError(f"bad insertion {part!r}; expected a:i or a:i*count")
        a, i, c = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
        if c < 1:
            raise UsageError(f"count must be positive in {part!r}")
        out += [(a, i)] * c
    return out


def _structure(args):
    if args.m1 is None or args.m2 is None:
        raise UsageError("--m1 and --m2 are required")
    if args.m1 < 1 or args.m2 < 1:
        raise UsageError("m1 and m2 must be positive")
    return build_structure(args.m1, args.m2)


def _sector(st, a):
    try:
        st.check_sector(a)
    except ValueError as e:
        raise UsageError(str(e))


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_invariant(args) -> int:
    st = _structure(args)
    ins = parse_insertions(args.insertions)
    for a, _ in ins:
        _sector(st, a)
    if args.genus < 0:
        raise UsageError("genus must be nonnegative")
    rec = extract_invariant(st, ins, args.genus, order=args.order)
    rule = st.degree_from_dimension(args.genus, ins)
    desc = " ".join(f"tau_{i}(phi_{a})" for a, i in rec.insertions)
    print(f"<{desc}>_g={rec.g} on P1[{st.m1},{st.m2}]")
    print(f"degree rule: d = rho (sum(i + q) - (2g - 2 + k)) = {format_rational(rule)}")
    if rec.vanishes:
        print("vanishes (degree-dimension)")
    else:
        print(f"d = {rec.d}")
        print(format_rational(rec.value))
    return EXIT_OK


def cmd_table(args) -> int:
    if args.table_id:
        try:
            T = golden_table(args.table_id)
        except KeyError as e:
            raise UsageError(e.args[0])
        st = build_structure(T.m1, T.m2)
        a, i, tid = T.a, T.i, T.id
        ks = [k for k in T.ks if args.kmax is None or k <= args.kmax]
        gs = [g for g in T.gs if args.gmax is None or g <= args.gmax]
    else:
        st = _structure(args)
        if args.sector is None or args.level is None or args.kmax is None or args.gmax is None:
            raise UsageError("without --table-id, give --m1 --m2 --sector --level --kmax --gmax")
        _sector(st, args.sector)
        a, i, tid = args.sector, args.level, None
        ks, gs = list(range(1, args.kmax + 1)), list(range(args.gmax + 1))
    if not ks or not gs:
        raise UsageError("empty table range")
    res = compute_table(st, a, i, ks, gs, order=args.order, table_id=tid)
    _emit(FORMATTERS[args.format](res), args.output)
    if res.truncated:
        print("order budget exceeded: TRUNC cells present", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    st = None
    if any(n != "golden" for n in names):
        st = _structure(args)
    checks = []
    for n in names:
        if n == "golden":
            ids = args.table_id or ["all"]
            try:
                checks += suite_golden(ids, k_max=args.kmax, g_max=args.gmax, order=args.order, jobs=args.jobs)
            except KeyError as e:
                raise UsageError(e.args[0])
        else:
            checks += run_suite(n, st, args.order or 10)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    errata = [c for c in checks if c.erratum]
    if args.strict:
        failed += errata
    trunc = any(c.truncated for c in checks)
    summary = f"{len(checks) - len(failed)} of {len(checks)} checks passed"
    if errata:
        summary += f"; {len(errata)} recorded value(s) contradicted and listed as errata"
    print(("FAIL: " if failed else "PASS: ") + summary)
    if failed:
        return EXIT_FAIL
    return EXIT_BUDGET if trunc else EXIT_OK


def cmd_onepoint(args) -> int:
    st = _structure(args)
    if args.sector is None:
        raise UsageError("--sector is required")
    _sector(st, args.sector)
    a = args.sector
    vals = {}
    if args.method in ("operator", "both"):
        v = one_point_values_operator(st, a, args.imax)
        vals["operator"] = {k: x for k, x in v.items() if k[1] <= args.gmax}
    if args.method in ("closed", "both"):
        vals["closed"] = one_point_values_closed(st, a, args.imax, args.gmax)
    primary = vals.get("operator", vals.get("closed"))
    print("i,g,d,value")
    for i in range(args.imax + 1):
        for g in range(args.gmax + 1):
            d = degree_from_dimension(st, g, [(a, i)])
            v = primary.get((i, g), ZERO)
            print(f"{i},{g},{'' if d is None else d},{format_rational(v)}")
    if args.method == "both":
        op = {k: x for k, x in vals["operator"].items() if x}
        cl = {k: x for k, x in vals["closed"].items() if x}
        if op != cl:
            for key in sorted(set(op) | set(cl)):
                if op.get(key) != cl.get(key):
                    print(f"MISMATCH (i,g)={key}: operator {op.get(key, 0)}, closed {cl.get(key, 0)}", file=sys.stderr)
            return EXIT_FAIL
        print("operator and closed-form routes agree", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orbifold-gw", description="Exact descendant invariants of orbifold projective lines.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(q, order_help="λ-order budget (default: automatic)"):
        q.add_argument("--m1", type=int)
        q.add_argument("--m2", type=int)
        q.add_argument("--order", type=int, help=order_help)

    q = sub.add_parser("invariant", help="one invariant <tau_i1(phi_a1) ... >_g")
    common(q)
    q.add_argument("--insertions", required=True, help='comma list "a:i*count", e.g. 1:1*5 or 1:0,2:1*2')
    q.add_argument("--genus", type=int, required=True)
    q.set_defaults(func=cmd_invariant)

    q = sub.add_parser("table", help="a grid over k and g of <tau_i(phi_a)^k>_g")
    common(q, "fixed λ-order budget; cells beyond it print TRUNC and the exit code is 2")
    q.add_argument("--table-id", choices=sorted(golden_tables()))
    q.add_argument("--sector", type=int)
    q.add_argument("--level", type=int)
    q.add_argument("--kmax", type=int)
    q.add_argument("--gmax", type=int)
    q.add_argument("--format", choices=sorted(FORMATTERS), default="csv")
    q.add_argument("--output")
    q.set_defaults(func=cmd_table)

    q = sub.add_parser("verify", help="run verification suites")
    common(q, "series order for tde/algebra/symmetry/routes (default 10); λ-budget for golden")
    q.add_argument("--suite", choices=SUITES + ("all",), default="all")
    q.add_argument("--table-id", action="append", help="golden table id or 'all' (repeatable)")
    q.add_argument("--kmax", type=int)
    q.add_argument("--gmax", type=int)
    q.add_argument("--jobs", type=int, default=1, help="worker processes for the golden suite")
    q.add_argument("--strict", action="store_true", help="treat cells listed as errata as failures")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("onepoint", help="one-point invariants <tau_i(phi_a)>_g")
    common(q)
    q.add_argument("--sector", type=int)
    q.add_argument("--imax", type=int, default=4)
    q.add_argument("--gmax", type=int, default=3)
    q.add_argument("--method", choices=("operator", "closed", "both"), default="operator")
    q.set_defaults(func=cmd_onepoint)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"orbifold-gw: error: {e}", file=sys.stderr)
        return EXIT_ARGS
    except TruncationError as e:
        print(f"orbifold-gw: order budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
