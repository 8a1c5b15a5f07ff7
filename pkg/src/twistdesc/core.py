"""Correlators on genus-0 spaces of stable maps to P^r.

An insertion is the exponent triple ``(u, m, c)`` of one marked point: the
power of the usual psi class, of the modified psi class, and of the pulled
back hyperplane class.  A correlator is a target dimension ``r``, a degree
``d`` and a list of insertions; its value is the top intersection number

    < tau_{u_1}^{m_1}(c_1) ... tau_{u_n}^{m_n}(c_n) >_d .

Internally every engine works on the sorted tuple of triples (the
canonical form), so that relabelling the marks never changes a value or a
cache key.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, NamedTuple

Triple = tuple[int, int, int]
Canon = tuple[Triple, ...]

__all__ = [
    "Insertion",
    "Correlator",
    "CanonicalKey",
    "InvalidCorrelator",
    "dimension",
    "codimension",
    "is_top",
    "canonical_key",
    "km_integral",
    "degree_zero_value",
    "as_integer",
    "factorial",
]


class InvalidCorrelator(ValueError):
    """Raised for a correlator that does not live on a well-defined space."""


class Insertion(NamedTuple):
    u: int = 0
    m: int = 0
    c: int = 0

    def __str__(self) -> str:
        parts = [f"{k}={v}" for k, v in zip("umc", self) if v]
        return f"tau[{','.join(parts) or 'c=0'}]"


@dataclass(frozen=True)
class Correlator:
    """A bracket ``<...>_d`` on ``M_{0,n}(P^r, d)``.

    Construction does not validate; :func:`check` does, and every evaluator
    calls it.  Insertion order is kept for display only.
    """

    r: int
    d: int
    insertions: tuple[Insertion, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "insertions", tuple(Insertion(*t) for t in self.insertions)
        )

    @classmethod
    def of(cls, r: int, d: int, *triples: Iterable[int]) -> "Correlator":
        return cls(r, d, tuple(Insertion(*t) for t in triples))

    @property
    def n(self) -> int:
        return len(self.insertions)

    def canon(self) -> Canon:
        return tuple(sorted(tuple(t) for t in self.insertions))

    def check(self) -> None:
        if self.r < 1:
            raise InvalidCorrelator(f"target dimension r={self.r} must be >= 1")
        if self.d < 0:
            raise InvalidCorrelator(f"degree d={self.d} must be >= 0")
        if self.n < 1:
            raise InvalidCorrelator("a correlator needs at least one mark")
        if any(x < 0 for t in self.insertions for x in t):
            raise InvalidCorrelator("exponents must be nonnegative")
        if self.d == 0 and self.n < 3:
            raise InvalidCorrelator(
                f"M_0,{self.n}(P^{self.r}, 0) is not stable (needs n >= 3)"
            )
        if self.d == 0 and any(t.m for t in self.insertions):
            raise InvalidCorrelator("modified psi classes need degree d > 0")

    def __str__(self) -> str:
        body = " ".join(str(t) for t in self.insertions)
        return f"<{body}>_{self.d} on P^{self.r}"


class CanonicalKey(NamedTuple):
    """Permutation-invariant identity of a correlator."""

    r: int
    d: int
    insertions: Canon

    def encode(self) -> bytes:
        triples = ",".join(f"{u}:{m}:{c}" for u, m, c in self.insertions)
        return f"{self.r};{self.d};{triples}".encode()


def dimension(r: int, d: int, n: int) -> int:
    """Dimension ``rd + r + d - 3 + n`` of ``M_{0,n}(P^r, d)``."""
    if r < 1 or d < 0 or n < 0:
        raise InvalidCorrelator(f"no space M_0,{n}(P^{r}, {d})")
    if d == 0 and n < 3:
        raise InvalidCorrelator(f"M_0,{n}(P^{r}, 0) is not stable")
    return r * d + r + d - 3 + n


def codimension(corr: Correlator) -> int:
    return sum(u + m + c for u, m, c in corr.insertions)


def is_top(corr: Correlator) -> bool:
    return codimension(corr) == dimension(corr.r, corr.d, corr.n)


def canonical_key(corr: Correlator) -> CanonicalKey:
    return CanonicalKey(corr.r, corr.d, corr.canon())


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return 1 if n < 2 else n * factorial(n - 1)


def multinomial(us: Iterable[int]) -> int:
    """``(sum us)! / prod(u!)`` as an exact integer."""
    total = 0
    result = 1
    for u in us:
        total += u
        result *= comb(total, u)
    return result


def km_integral(us: Iterable[int]) -> Fraction:
    """Top psi integral on the Knudsen-Mumford space ``M_{0,n}``.

    ``us`` lists the psi exponent of each of the ``n`` marks.  The value is
    the multinomial coefficient ``(n-3)! / prod(u_i!)`` when the exponents
    sum to ``n - 3`` and zero otherwise.
    """
    us = tuple(us)
    if len(us) < 3:
        raise InvalidCorrelator(f"M_0,{len(us)} is not stable")
    if sum(us) != len(us) - 3:
        return Fraction(0)
    return Fraction(multinomial(us))


def _degree_zero(r: int, ins: Canon) -> Fraction:
    # M_{0,n}(P^r, 0) = M_{0,n} x P^r; all eta classes pull back from P^r.
    if sum(c for _, _, c in ins) != r:
        return Fraction(0)
    return km_integral(u + m for u, m, _ in ins)


def degree_zero_value(corr: Correlator) -> Fraction:
    if corr.d != 0:
        raise InvalidCorrelator(f"degree_zero_value needs d = 0, got d={corr.d}")
    corr.check()
    return _degree_zero(corr.r, corr.canon())


def as_integer(value: Fraction, what: str = "value") -> int:
    """Return ``value`` as an int, raising if it has a denominator."""
    if value.denominator != 1:
        raise ArithmeticError(f"{what} {value} is not an integer")
    return value.numerator


# -- canonical-form helpers shared by the engines -------------------------


def top_dim(r: int, d: int, ins: Canon) -> bool:
    return sum(u + m + c for u, m, c in ins) == r * d + r + d - 3 + len(ins)


def remove_one(ins: Canon, t: Triple) -> Canon:
    i = ins.index(t)
    return ins[:i] + ins[i + 1:]


def add_one(ins: Canon, t: Triple) -> Canon:
    lst = list(ins)
    bisect.insort(lst, t)
    return tuple(lst)


def replace_one(ins: Canon, old: Triple, new: Triple) -> Canon:
    return add_one(remove_one(ins, old), new)


def merge(a: Canon, b: Iterable[Triple]) -> Canon:
    return tuple(sorted(itertools.chain(a, b)))


def grouped(ins: Canon) -> list[tuple[Triple, int]]:
    """Distinct triples of a sorted tuple with their multiplicities."""
    return [(t, len(list(g))) for t, g in itertools.groupby(ins)]


def submultisets(ins: Canon) -> Iterator[tuple[Canon, Canon, int]]:
    """Yield ``(chosen, rest, weight)`` over all sub-multisets of ``ins``.

    Marks carrying identical triples are interchangeable, so a choice of
    ``k`` out of ``n`` equal marks stands for ``comb(n, k)`` subsets of mark
    labels; ``weight`` is the product of those binomials.  Summing the
    weights gives ``2 ** len(ins)``.
    """
    groups = grouped(ins)
    for counts in itertools.product(*(range(n + 1) for _, n in groups)):
        chosen: list[Triple] = []
        rest: list[Triple] = []
        weight = 1
        for (t, n), k in zip(groups, counts):
            chosen.extend([t] * k)
            rest.extend([t] * (n - k))
            weight *= comb(n, k)
        yield tuple(chosen), tuple(rest), weight
