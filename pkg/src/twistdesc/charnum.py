"""Characteristic numbers of rational curves as twisted descendants.

Each condition uses one mark.  Incidence to a codimension-k linear space
is eta^k.  Tangency to a hyperplane H at a given codimension-k subspace of
H is Phi * eta^k with Phi = eta (eta + psibar), so it expands to
eta^(k+2) + eta^(k+1) psibar.  A characteristic number is the sum of the
twisted descendants obtained by multiplying out these binomials.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .core import CanonicalKey, Correlator, Insertion, dimension
from .memo import EvalContext, MemoCache, default_context
from .twisted import _twisted

__all__ = [
    "ConditionSpec",
    "CharnumQuery",
    "GateError",
    "ConsistencyError",
    "phi_expand",
    "build_correlators",
    "characteristic_number",
    "intersection_number",
    "expand_grouped",
    "plane_query",
    "cubic_query",
    "table",
    "TABLES",
]


class GateError(ValueError):
    """Conditions do not cut out a finite set."""

    def __init__(self, message: str, required: int = 0, provided: int = 0) -> None:
        super().__init__(message)
        self.required = required
        self.provided = provided


class ConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConditionSpec:
    """``tangent=False``: meet a codim-k space.  ``True``: tangent to H along a codim-k space of H."""

    tangent: bool
    k: int

    @classmethod
    def incidence(cls, k: int) -> "ConditionSpec":
        return cls(False, k)

    @classmethod
    def tangency(cls, k: int = 0) -> "ConditionSpec":
        return cls(True, k)

    def codim(self) -> int:
        return self.k + 2 if self.tangent else self.k

    def validate(self, r: int) -> None:
        if self.tangent and not 0 <= self.k <= r - 1:
            raise GateError(f"tangency needs 0 <= k <= r-1 = {r - 1}, got k={self.k}")
        if not self.tangent and not 1 <= self.k <= r:
            raise GateError(f"incidence needs 1 <= k <= r = {r}, got k={self.k}")


@dataclass(frozen=True)
class CharnumQuery:
    r: int
    d: int
    conditions: tuple[ConditionSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "conditions", tuple(self.conditions))

    @property
    def tangencies(self) -> int:
        return sum(c.tangent for c in self.conditions)

    def required_codim(self) -> int:
        return dimension(self.r, self.d, len(self.conditions))

    def provided_codim(self) -> int:
        return sum(c.codim() for c in self.conditions)

    def enumerative(self) -> bool:
        """Whether the number is known to count curves (d >= 2 with tangencies, r >= 2)."""
        return self.r >= 2 and (self.tangencies == 0 or self.d >= 2)

    def check_gate(self) -> None:
        if not self.conditions:
            raise GateError("no conditions given")
        for cond in self.conditions:
            cond.validate(self.r)
        if self.d == 0:
            raise GateError("characteristic numbers need degree d >= 1")
        need, have = self.required_codim(), self.provided_codim()
        if need != have:
            raise GateError(
                f"not a finite count: required codimension {need} "
                f"(dim M_0,{len(self.conditions)}(P^{self.r},{self.d})), provided {have}",
                need,
                have,
            )


def phi_expand(k: int, r: int) -> list[Insertion]:
    """Insertions whose sum is Phi * eta^k; eta^(k+2) drops when k+2 > r."""
    if not 0 <= k <= r - 1:
        raise GateError(f"tangency at codimension {k} in a hyperplane of P^{r} is empty")
    out = []
    if k + 2 <= r:
        out.append(Insertion(0, 0, k + 2))
    out.append(Insertion(0, 1, k + 1))
    return out


def build_correlators(q: CharnumQuery) -> list[tuple[int, Correlator]]:
    q.check_gate()
    choices = [
        phi_expand(c.k, q.r) if c.tangent else [Insertion(0, 0, c.k)]
        for c in q.conditions
    ]
    return [(1, Correlator(q.r, q.d, combo)) for combo in itertools.product(*choices)]


def expand_grouped(q: CharnumQuery) -> Counter:
    """Canonical key -> multiplicity, without listing all 2^b products.

    Equal conditions are interchangeable: if j of b identical tangencies
    take the psibar term, ``comb(b, j)`` products share one correlator.
    Agrees with tallying :func:`build_correlators`.
    """
    q.check_gate()
    parts: list[list[tuple[int, tuple]]] = []
    for cond, count in sorted(Counter(q.conditions).items(), key=lambda kv: (kv[0].tangent, kv[0].k)):
        if not cond.tangent:
            parts.append([(1, ((0, 0, cond.k),) * count)])
            continue
        terms = phi_expand(cond.k, q.r)
        if len(terms) == 1:
            parts.append([(1, (tuple(terms[0]),) * count)])
            continue
        plain, twisted = (tuple(t) for t in terms)
        parts.append(
            [(comb(count, j), (plain,) * (count - j) + (twisted,) * j) for j in range(count + 1)]
        )
    tally: Counter = Counter()
    for combo in itertools.product(*parts):
        weight = 1
        ins: list = []
        for w, triples in combo:
            weight *= w
            ins.extend(triples)
        tally[CanonicalKey(q.r, q.d, tuple(sorted(ins)))] += weight
    return tally


def intersection_number(
    q: CharnumQuery, cache: Optional[MemoCache] = None, ctx: Optional[EvalContext] = None
) -> Fraction:
    """Sum of the expansion, with no enumerativity or integrality checks."""
    ctx = ctx or default_context(cache)
    tally = expand_grouped(q)
    total = Fraction(0)
    for key in sorted(tally):
        total += tally[key] * _twisted(ctx, key.r, key.d, key.insertions)
    return total


def characteristic_number(
    q: CharnumQuery, cache: Optional[MemoCache] = None, ctx: Optional[EvalContext] = None
) -> int:
    if q.tangencies and q.d < 2:
        raise GateError("tangency conditions need degree d >= 2")
    value = intersection_number(q, cache, ctx)
    if value.denominator != 1 or value < 0:
        raise ConsistencyError(f"characteristic number {value} is not a nonnegative integer")
    return value.numerator


def plane_query(d: int, a: int, b: int = 0, c: int = 0) -> CharnumQuery:
    """N_d(a, b, c) in P^2: a points, b tangent lines, c tangent lines at given points."""
    conds = (
        [ConditionSpec.incidence(2)] * a
        + [ConditionSpec.tangency(0)] * b
        + [ConditionSpec.tangency(1)] * c
    )
    return CharnumQuery(2, d, tuple(conds))


def cubic_query(a: int, b: int, c: int, d: int, e: int, degree: int = 3) -> CharnumQuery:
    """N(a, b, c, d, e) in P^3.

    a lines met, b planes touched, c points passed, d planes touched at a
    given line, e planes touched at a given point.
    """
    conds = (
        [ConditionSpec.incidence(2)] * a
        + [ConditionSpec.tangency(0)] * b
        + [ConditionSpec.incidence(3)] * c
        + [ConditionSpec.tangency(1)] * d
        + [ConditionSpec.tangency(2)] * e
    )
    return CharnumQuery(3, degree, tuple(conds))


# -- the three twisted-cubic tables -----------------------------------------


@dataclass(frozen=True)
class TableSpec:
    title: str
    row_name: str
    col_name: str
    rows: range
    cols: range
    free_name: str

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.rows for j in self.cols if self.free(i, j) >= 0]


class _PlanesPoints(TableSpec):
    def free(self, c: int, e: int) -> int:
        return 12 - 3 * e - 2 * c

    def query(self, c: int, e: int) -> CharnumQuery:
        return cubic_query(0, self.free(c, e), c, 0, e)


class _PlanesLines(TableSpec):
    def free(self, b: int, d: int) -> int:
        return 12 - 2 * d - b

    def query(self, b: int, d: int) -> CharnumQuery:
        return cubic_query(self.free(b, d), b, 0, d, 0)


class _TangencyMix(TableSpec):
    def free(self, d: int, e: int) -> int:
        return 12 - 3 * e - 2 * d

    def query(self, d: int, e: int) -> CharnumQuery:
        return cubic_query(0, self.free(d, e), 0, d, e)


TABLES: dict[str, TableSpec] = {
    "planes-points": _PlanesPoints(
        "twisted cubics tangent to e planes at given points, through c points, "
        "tangent to b = 12-3e-2c further planes",
        "c", "e", range(0, 7), range(0, 5), "b",
    ),
    "planes-lines": _PlanesLines(
        "twisted cubics tangent to d planes at given lines, tangent to b further "
        "planes, meeting a = 12-2d-b lines",
        "b", "d", range(0, 13), range(0, 7), "a",
    ),
    "tangency-mix": _TangencyMix(
        "twisted cubics tangent to e planes at given points, to d planes at given "
        "lines, and to b = 12-3e-2d further planes",
        "d", "e", range(0, 7), range(0, 5), "b",
    ),
}


def table(
    name: str, cache: Optional[MemoCache] = None, ctx: Optional[EvalContext] = None
) -> dict[tuple[int, int], int]:
    """All cells ``(row, col) -> N`` of a named table, in row-major order."""
    try:
        spec = TABLES[name]
    except KeyError:
        raise KeyError(f"unknown table {name!r}; choose from {sorted(TABLES)}") from None
    ctx = ctx or default_context(cache)
    return {cell: characteristic_number(spec.query(*cell), ctx=ctx) for cell in spec.cells()}


def format_table(name: str, grid: dict[tuple[int, int], int], style: str = "plain") -> str:
    spec = TABLES[name]
    rows = [i for i in spec.rows if any((i, j) in grid for j in spec.cols)]
    cols = [j for j in spec.cols if any((i, j) in grid for i in spec.rows)]
    header = [""] + [f"{spec.col_name}={j}" for j in cols]
    body = [
        [f"{spec.row_name}={i}"] + [str(grid[i, j]) if (i, j) in grid else "" for j in cols]
        for i in rows
    ]
    if style == "tsv":
        return "\n".join("\t".join(line).rstrip("\t") for line in [header] + body) + "\n"
    widths = [max(len(line[k]) for line in [header] + body) for k in range(len(header))]
    out = [f"# {name}: {spec.title}"]
    for line in [header] + body:
        cells = [line[0].ljust(widths[0])] + [x.rjust(w) for x, w in zip(line[1:], widths[1:])]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


def conditions_summary(conds: Sequence[ConditionSpec]) -> str:
    tally = Counter(conds)
    parts = []
    for cond in sorted(tally, key=lambda c: (c.tangent, c.k)):
        kind = "tangent" if cond.tangent else "incidence"
        parts.append(f"{tally[cond]}x{kind}(k={cond.k})")
    return " ".join(parts)
