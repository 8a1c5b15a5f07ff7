"""Genus-0 Gromov-Witten invariants of P^r.

``<tau_0(c_1) ... tau_0(c_n)>_d`` counts degree-d rational curves meeting
general linear subspaces of codimensions c_i.  Marks of codimension 0 kill
the invariant (for d > 0), codimension-1 marks come off by the divisor
equation, and the rest is solved from the WDVV associativity relation:
split one class eta^x as eta * eta^(x-1) and compare the two boundary
divisors (P Q | R S) and (P R | Q S) of M_{0,4}.  The target is the single
term of the first sum whose P,Q twig is a contracted three-pointed twig.

Recursion order: (d, #marks, -sum c_i^2) decreases lexicographically,
counting only marks of codimension >= 2.  The one term of the same degree
and length, <tau(x-1) tau(y+1) ...>, has strictly larger sum of squares
because the split mark is chosen with x <= y.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import (
    Canon,
    CanonicalKey,
    InvalidCorrelator,
    add_one,
    merge,
    remove_one,
    submultisets,
    top_dim,
)
from .memo import EvalContext, MemoCache, default_context

ZERO = Fraction(0)
ONE = Fraction(1)
HYPERPLANE = (0, 0, 1)

__all__ = ["GwQuery", "WdvvTerm", "gw_invariant", "wdvv_terms", "wdvv_sides"]


@dataclass(frozen=True)
class GwQuery:
    r: int
    d: int
    codims: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "codims", tuple(self.codims))
        if self.r < 1:
            raise InvalidCorrelator(f"target dimension r={self.r} must be >= 1")
        if self.d < 0 or any(c < 0 for c in self.codims):
            raise InvalidCorrelator("degree and codimensions must be nonnegative")

    def canon(self) -> Canon:
        return tuple(sorted((0, 0, c) for c in self.codims))


@dataclass(frozen=True)
class WdvvTerm:
    """One boundary term ``<A, tau_0(e)>_{d_a} * <tau_0(r-e), B>_{d_b}``.

    ``spectators_a`` are the codimensions of the non-distinguished marks
    placed on the A twig; ``weight`` counts the mark labellings that give
    this same pair of invariants.
    """

    spectators_a: tuple[int, ...]
    d_a: int
    d_b: int
    e: int
    left: GwQuery
    right: GwQuery
    weight: int


def _side(
    r: int, d: int, pair_a: Canon, pair_b: Canon, spectators: Canon, prune: bool
) -> Iterator[tuple[int, Canon, int, int, int, Canon, Canon]]:
    for chosen, rest, weight in submultisets(spectators):
        a_base = merge(pair_a, chosen)
        b_base = merge(pair_b, rest)
        codim_a = sum(c for _, _, c in a_base)
        for d_a in range(d + 1):
            if prune:
                e = r * d_a + r + d_a - 3 + len(a_base) + 1 - codim_a
                es = (e,) if 0 <= e <= r else ()
            else:
                es = range(r + 1)
            for e in es:
                yield (
                    weight,
                    chosen,
                    d_a,
                    d - d_a,
                    e,
                    add_one(a_base, (0, 0, e)),
                    add_one(b_base, (0, 0, r - e)),
                )


def _product(ctx: EvalContext, r: int, d_a: int, left: Canon, d_b: int, right: Canon) -> Fraction:
    # Degree-0 factors are closed forms; evaluate them first to prune.
    if d_b == 0 and d_a != 0:
        v = _gw(ctx, r, d_b, right)
        return v * _gw(ctx, r, d_a, left) if v else ZERO
    v = _gw(ctx, r, d_a, left)
    return v * _gw(ctx, r, d_b, right) if v else ZERO


def _measure(d: int, ins: Canon) -> tuple[int, int, int]:
    big = [c for _, _, c in ins if c >= 2]
    return (d, len(big), -sum(c * c for c in big))


def _choose_split(ctx: EvalContext, ins: Canon) -> tuple[int, int, int]:
    """Indices (a, b, c): split mark a, partner b with c_b >= c_a, third c."""
    cs = [t[2] for t in ins]
    n = len(cs)
    if ctx.rng is None:
        a = min(range(n), key=lambda i: (cs[i], i))
        others = [i for i in range(n) if i != a]
        b = max(others, key=lambda i: (cs[i], -i))
        c = next(i for i in others if i != b)
        return a, b, c
    eligible = [i for i in range(n) if any(cs[j] >= cs[i] for j in range(n) if j != i)]
    a = ctx.pick(eligible)
    b = ctx.pick([j for j in range(n) if j != a and cs[j] >= cs[a]])
    c = ctx.pick([j for j in range(n) if j not in (a, b)])
    return a, b, c


def _solve_wdvv(ctx: EvalContext, r: int, d: int, ins: Canon) -> Fraction:
    a, b, c = _choose_split(ctx, ins)
    x = ins[a][2]
    P, Q, R, S = HYPERPLANE, (0, 0, x - 1), ins[b], ins[c]
    spectators = tuple(t for i, t in enumerate(ins) if i not in (a, b, c))
    target = _measure(d, ins)

    lhs = ZERO
    for weight, chosen, d_a, d_b, e, left, right in _side(
        r, d, tuple(sorted((P, Q))), tuple(sorted((R, S))), spectators, True
    ):
        if d_a == 0 and not chosen:
            continue  # the target itself, with coefficient <P Q tau(r-x)>_0 = 1
        assert d_a < d or _measure(d_a, left) < target
        assert d_b < d or _measure(d_b, right) < target
        lhs += weight * _product(ctx, r, d_a, left, d_b, right)

    rhs = ZERO
    for weight, chosen, d_a, d_b, e, left, right in _side(
        r, d, tuple(sorted((P, R))), tuple(sorted((Q, S))), spectators, True
    ):
        assert d_a < d or _measure(d_a, left) < target
        assert d_b < d or _measure(d_b, right) < target
        rhs += weight * _product(ctx, r, d_a, left, d_b, right)
    return rhs - lhs


def _gw(ctx: EvalContext, r: int, d: int, ins: Canon) -> Fraction:
    """Invariant of a canonical tuple whose triples are all ``(0, 0, c)``."""
    if any(t[2] > r for t in ins) or not top_dim(r, d, ins):
        return ZERO
    n = len(ins)
    if d == 0:
        # top-dimensional on M_{0,n} x P^r forces n = 3, sum c = r
        return ONE if n == 3 else ZERO
    if n and ins[0] == (0, 0, 0):
        return ZERO
    if HYPERPLANE in ins:
        return d * _gw(ctx, r, d, remove_one(ins, HYPERPLANE))
    if n == 0:
        return ONE  # top-dimensional M_{0,0}(P^1, 1) is a point
    if n < 3:
        # only <tau_0(r) tau_0(r)>_1 is top with all codims >= 2
        return ONE if d == 1 and ins == ((0, 0, r), (0, 0, r)) else ZERO

    key = CanonicalKey(r, d, ins)
    value = ctx.cache.get(key)
    if value is None:
        value = _solve_wdvv(ctx, r, d, ins)
        ctx.cache.put(key, value)
    return value


def gw_invariant(
    q: GwQuery, cache: Optional[MemoCache] = None, ctx: Optional[EvalContext] = None
) -> Fraction:
    """Exact value of ``<tau_0(c_1) ... tau_0(c_n)>_d`` on P^r.

    Not top-dimensional, or any ``c_i > r``, gives 0.
    """
    ctx = ctx or default_context(cache)
    if q.d == 0 and len(q.codims) < 3:
        raise InvalidCorrelator("degree-0 invariants need at least three marks")
    return _gw(ctx, q.r, q.d, q.canon())


def wdvv_terms(
    q: GwQuery, distinguished: tuple[int, int, int, int], prune: bool = False
) -> tuple[list[WdvvTerm], list[WdvvTerm]]:
    """Both sides of the WDVV relation on the marks of ``q``.

    With ``distinguished = (i, j, k, l)`` the first list expands the
    boundary divisor (i j | k l) and the second (i k | j l); each term
    multiplies two invariants of lower-dimensional spaces.  Against a class
    of codimension ``dim - 1`` both sides sum to the same number.  With
    ``prune`` only the diagonal exponent that can make the A side
    top-dimensional is kept; otherwise all ``e = 0..r`` appear.
    """
    i, j, k, l = distinguished
    if len({i, j, k, l}) != 4:
        raise ValueError("need four distinct marks")
    cs = q.codims
    spectators = tuple(sorted((0, 0, c) for x, c in enumerate(cs) if x not in distinguished))

    def side(a1: int, a2: int, b1: int, b2: int) -> list[WdvvTerm]:
        pair_a = tuple(sorted(((0, 0, cs[a1]), (0, 0, cs[a2]))))
        pair_b = tuple(sorted(((0, 0, cs[b1]), (0, 0, cs[b2]))))
        return [
            WdvvTerm(
                tuple(t[2] for t in chosen),
                d_a,
                d_b,
                e,
                GwQuery(q.r, d_a, tuple(t[2] for t in left)),
                GwQuery(q.r, d_b, tuple(t[2] for t in right)),
                weight,
            )
            for weight, chosen, d_a, d_b, e, left, right in _side(
                q.r, q.d, pair_a, pair_b, spectators, prune
            )
        ]

    return side(i, j, k, l), side(i, k, j, l)


def wdvv_sides(
    q: GwQuery, distinguished: tuple[int, int, int, int], cache: Optional[MemoCache] = None
) -> tuple[Fraction, Fraction]:
    """Evaluate both sums of :func:`wdvv_terms`."""
    ctx = default_context(cache)
    lhs, rhs = wdvv_terms(q, distinguished)
    return tuple(  # type: ignore[return-value]
        sum(
            (t.weight * _gw(ctx, q.r, t.d_a, t.left.canon()) * _gw(ctx, q.r, t.d_b, t.right.canon())
             for t in terms),
            ZERO,
        )
        for terms in (lhs, rhs)
    )
