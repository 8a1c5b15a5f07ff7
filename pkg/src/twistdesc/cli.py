"""Command-line front end.

Exit codes: 0 success, 2 parse/usage error, 3 invalid correlator or failed
dimension gate, 4 failed self-check.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .charnum import (
    TABLES,
    CharnumQuery,
    ConditionSpec,
    ConsistencyError,
    GateError,
    characteristic_number,
    conditions_summary,
    format_table,
    intersection_number,
    table,
)
from .checks import LEVELS, run_checks
from .core import InvalidCorrelator, codimension, dimension
from .dsl import ParseError, format_correlator, parse_correlator
from .memo import ENV_VAR, CacheFormatError, MemoCache
from .twisted import eval_twisted

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_CHECK = 0, 2, 3, 4


def _fraction_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def _open_cache(path: Optional[str]) -> MemoCache:
    if path and os.path.exists(path):
        return MemoCache.load(path)
    return MemoCache()


def _close_cache(cache: MemoCache, path: Optional[str]) -> None:
    if path:
        cache.store(path)


def cmd_eval(args: argparse.Namespace) -> int:
    corr = parse_correlator(args.expr, args.r, args.d)
    corr.check()
    cache = _open_cache(args.cache)
    value = eval_twisted(corr, cache)
    need = dimension(corr.r, corr.d, corr.n)
    have = codimension(corr)
    top = need == have
    if not top:
        print(
            f"warning: not top-dimensional (codimension {have}, dimension {need}); value is 0",
            file=sys.stderr,
        )
    _close_cache(cache, args.cache)
    if args.format == "json":
        print(json.dumps({
            "query": format_correlator(corr),
            "r": corr.r,
            "d": corr.d,
            "value": _fraction_json(value),
            "top_dimensional": top,
            "cache_hits": cache.hits,
        }))
    elif args.format == "tsv":
        print(f"{format_correlator(corr)}\t{corr.r}\t{corr.d}\t{value}")
    else:
        print(value)
    return EXIT_OK


def _conditions(args: argparse.Namespace) -> list[ConditionSpec]:
    r = args.r
    conds = [ConditionSpec.incidence(k) for k in args.incidence or []]
    conds += [ConditionSpec.tangency(k) for k in args.tangent or []]
    named = [
        (args.points, False, r),
        (args.lines, False, r - 1),
        (args.tangent_planes, True, 0),
        (args.tangent_at_line, True, r - 2),
        (args.tangent_at_point, True, r - 1),
    ]
    for count, tangent, k in named:
        conds += [ConditionSpec(tangent, k)] * (count or 0)
    return conds


def cmd_charnum(args: argparse.Namespace) -> int:
    q = CharnumQuery(args.r, args.d, tuple(_conditions(args)))
    q.check_gate()
    cache = _open_cache(args.cache)
    if q.enumerative():
        value = Fraction(characteristic_number(q, cache))
        label = "characteristic number"
    else:
        value = intersection_number(q, cache)
        label = "intersection number"
        print(
            "warning: outside the range where tangency classes are known to be "
            "enumerative (needs r >= 2, d >= 2); reporting the intersection number",
            file=sys.stderr,
        )
    _close_cache(cache, args.cache)
    if args.format == "json":
        print(json.dumps({
            "query": conditions_summary(q.conditions),
            "r": q.r,
            "d": q.d,
            "value": _fraction_json(value),
            "kind": label,
            "cache_hits": cache.hits,
        }))
    elif args.format == "tsv":
        print(f"{conditions_summary(q.conditions)}\t{q.r}\t{q.d}\t{value}")
    else:
        print(value if q.enumerative() else f"{label}: {value}")
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    cache = _open_cache(args.cache)
    grid = table(args.name, cache)
    _close_cache(cache, args.cache)
    if args.format == "json":
        spec = TABLES[args.name]
        print(json.dumps({
            "table": args.name,
            "rows": spec.row_name,
            "cols": spec.col_name,
            "cells": [{spec.row_name: i, spec.col_name: j, "value": v} for (i, j), v in grid.items()],
        }))
    else:
        sys.stdout.write(format_table(args.name, grid, args.format))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    cache = _open_cache(args.cache)

    def report(result) -> None:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.name} ({result.cases} cases)")
        for line in result.failures[:5]:
            print(f"      {line}")

    results = run_checks(args.level, seed=args.seed, cache=cache, report=report)
    _close_cache(cache, args.cache)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistdesc",
        description="Exact twisted descendants and characteristic numbers of rational curves in P^r.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats: Sequence[str]) -> None:
        p.add_argument(
            "--cache",
            default=os.environ.get(ENV_VAR) or None,
            help=f"memo file to load and update (default: ${ENV_VAR})",
        )
        p.add_argument("--format", choices=formats, default="plain")

    p = sub.add_parser("eval", help="evaluate a correlator such as 'tau[c=3]^5 tau[m=1,c=2]'")
    p.add_argument("--r", type=int, required=True, help="target P^r")
    p.add_argument("--d", type=int, required=True, help="curve degree")
    p.add_argument("expr")
    common(p, ("plain", "json", "tsv"))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("charnum", help="count rational curves under incidence/tangency conditions")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--incidence", type=int, action="append", metavar="K",
                   help="meet a given codimension-K linear space (repeatable)")
    p.add_argument("--tangent", type=int, action="append", metavar="K",
                   help="tangent to a hyperplane H at a given codimension-K subspace of H (repeatable)")
    p.add_argument("--points", type=int, metavar="N", help="pass through N points")
    p.add_argument("--lines", type=int, metavar="N", help="meet N lines")
    p.add_argument("--tangent-planes", type=int, metavar="N", help="tangent to N hyperplanes")
    p.add_argument("--tangent-at-line", type=int, metavar="N",
                   help="tangent to N hyperplanes at given lines")
    p.add_argument("--tangent-at-point", type=int, metavar="N",
                   help="tangent to N hyperplanes at given points")
    common(p, ("plain", "json", "tsv"))
    p.set_defaults(func=cmd_charnum)

    p = sub.add_parser("table", help="reproduce a table of twisted-cubic numbers")
    p.add_argument("name", choices=sorted(TABLES))
    common(p, ("plain", "tsv", "json"))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="run the identity self-checks")
    p.add_argument("level", nargs="?", default="quick", choices=sorted(LEVELS))
    p.add_argument("--seed", type=int, default=20260101)
    p.add_argument("--cache", default=os.environ.get(ENV_VAR) or None)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CacheFormatError as exc:
        print(f"bad cache file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InvalidCorrelator, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
