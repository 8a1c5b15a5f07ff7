"""Identity suites run by ``twistdesc check``.

Every check draws small random correlators (r <= 3, d <= 2, n <= 6) from a
seeded generator and compares two independent evaluations of the same
number.  ``quick`` runs a few dozen cases per suite, ``full`` a few
hundred.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .charnum import table
from .core import Canon, add_one, dimension
from .descendants import DILATON, DIVISOR, PUNCTURE, _dilaton, _divisor, _puncture
from .gw import GwQuery, wdvv_sides
from .memo import EvalContext, MemoCache
from .twisted import _twisted

LEVELS = {"quick": 30, "full": 250}


@dataclass
class CheckResult:
    name: str
    cases: int
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def random_correlator(
    rng: random.Random,
    *,
    twisted: bool = False,
    excess: int = 0,
    min_n: int = 1,
    max_n: int = 6,
    min_d: int = 0,
    psi: bool = True,
) -> tuple[int, int, Canon]:
    """A canonical tuple whose codimension is ``dim + excess``."""
    while True:
        r = rng.randint(1, 3)
        d = rng.randint(max(min_d, 1 if twisted else 0), 2)
        lo = max(min_n, 3 if d == 0 else 1)
        if lo > max_n:
            continue
        n = rng.randint(lo, max_n)
        budget = dimension(r, d, n) + excess
        if budget < 0:
            continue
        marks = [[0, 0, 0] for _ in range(n)]
        for _ in range(budget):
            i = rng.randrange(n)
            slots = ([0] if psi else []) + ([1] if twisted else []) + ([2] if marks[i][2] < r else [])
            if not slots:
                break
            marks[i][rng.choice(slots)] += 1
        else:
            return r, d, tuple(sorted(tuple(t) for t in marks))


def _eval(ctx: EvalContext, r: int, d: int, ins: Canon) -> Fraction:
    return _twisted(ctx, r, d, ins)


def check_wdvv(rng: random.Random, cases: int, cache: MemoCache) -> CheckResult:
    failures = []
    for _ in range(cases):
        r, d, ins = random_correlator(rng, excess=-1, min_n=4, psi=False)
        q = GwQuery(r, d, tuple(c for _, _, c in ins))
        marks = tuple(rng.sample(range(len(ins)), 4))
        lhs, rhs = wdvv_sides(q, marks, cache)
        if lhs != rhs:
            failures.append(f"WDVV {q} {marks}: {lhs} != {rhs}")
    return CheckResult("wdvv", cases, failures)


def check_equations(rng: random.Random, cases: int, cache: MemoCache, twisted: bool) -> CheckResult:
    ctx = EvalContext(cache)
    failures = []
    for i in range(cases):
        which = ("puncture", "dilaton", "divisor")[i % 3]
        excess = 1 if which == "puncture" else 0
        r, d, ins = random_correlator(rng, twisted=twisted, excess=excess, max_n=5, min_d=1)
        if which == "puncture":
            lhs_ins = add_one(ins, PUNCTURE)
            rhs = sum((c * _eval(ctx, r, d, t) for c, t in _puncture(lhs_ins)), Fraction(0))
        elif which == "dilaton":
            lhs_ins = add_one(ins, DILATON)
            coef, rest = _dilaton(lhs_ins)
            rhs = coef * _eval(ctx, r, d, rest)
        else:
            lhs_ins = add_one(ins, DIVISOR)
            rhs = sum((c * _eval(ctx, r, d, t) for c, t in _divisor(d, lhs_ins)), Fraction(0))
        lhs = _eval(ctx, r, d, lhs_ins)
        if lhs != rhs:
            failures.append(f"{which} r={r} d={d} {lhs_ins}: {lhs} != {rhs}")
    name = "twisted-equations" if twisted else "descendant-equations"
    return CheckResult(name, cases, failures)


def check_path_independence(
    rng: random.Random, cases: int, cache: MemoCache, twisted: bool
) -> CheckResult:
    failures = []
    for _ in range(cases):
        r, d, ins = random_correlator(rng, twisted=twisted, min_d=1 if twisted else 0)
        want = _twisted(EvalContext(cache), r, d, ins)
        seed = rng.randrange(1 << 30)
        got = _twisted(EvalContext(MemoCache(), random.Random(seed)), r, d, ins)
        if want != got:
            failures.append(f"r={r} d={d} {ins} seed={seed}: {want} != {got}")
    name = "twisted-pivot-independence" if twisted else "trr-choice-independence"
    return CheckResult(name, cases, failures)


def check_tables(cache: MemoCache, full: bool) -> CheckResult:
    failures = []
    points = table("planes-points", cache)
    if full:
        mix = table("tangency-mix", cache)
        lines = table("planes-lines", cache)
    else:
        from .charnum import TABLES, characteristic_number

        mix = {(0, e): characteristic_number(TABLES["tangency-mix"].query(0, e), cache) for e in range(5)}
        lines = {(12, 0): characteristic_number(TABLES["planes-lines"].query(12, 0), cache)}
    for e in range(5):
        if points[0, e] != mix[0, e]:
            failures.append(f"planes-points c=0,e={e} {points[0, e]} != tangency-mix d=0 {mix[0, e]}")
    if not points[0, 0] == lines[12, 0]:
        failures.append(f"corner {points[0, 0]} != planes-lines b=12 {lines[12, 0]}")
    if full:
        # N(0,b,0,d,0) sits in both planes-lines (a = 0) and tangency-mix (e = 0)
        for (b, d), value in lines.items():
            if 12 - 2 * d - b == 0 and mix.get((d, 0)) != value:
                failures.append(f"planes-lines b={b},d={d} {value} != tangency-mix {mix.get((d, 0))}")
    return CheckResult("cross-table", 1, failures)


def run_checks(
    level: str = "quick",
    seed: int = 20260101,
    cache: Optional[MemoCache] = None,
    report: Optional[Callable[[CheckResult], None]] = None,
) -> list[CheckResult]:
    if level not in LEVELS:
        raise ValueError(f"unknown check level {level!r}; choose from {sorted(LEVELS)}")
    cases = LEVELS[level]
    cache = cache if cache is not None else MemoCache()
    rng = random.Random(seed)
    suites = [
        lambda: check_wdvv(rng, cases, cache),
        lambda: check_equations(rng, cases, cache, twisted=False),
        lambda: check_equations(rng, cases, cache, twisted=True),
        lambda: check_path_independence(rng, cases, cache, twisted=False),
        lambda: check_path_independence(rng, cases, cache, twisted=True),
        lambda: check_tables(cache, full=level == "full"),
    ]
    results = []
    for suite in suites:
        result = suite()
        results.append(result)
        if report:
            report(result)
    return results
