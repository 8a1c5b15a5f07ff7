"""Gravitational descendants <tau_{u_1}(c_1) ... tau_{u_n}(c_n)>_d of P^r.

Evaluation strips puncture, dilaton and divisor marks, uses the
topological recursion relation while there are three or more marks, and
introduces marks with the divisor equation read backwards when there are
fewer.  Everything bottoms out in Gromov-Witten invariants and the degree-0
closed form.

The recursion relation comes from psi_1 = (1 | j, k): the pivot mark lies
on the A twig and the two spectators j, k on the B twig.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from .core import (
    Canon,
    CanonicalKey,
    Correlator,
    InvalidCorrelator,
    _degree_zero,
    add_one,
    grouped,
    merge,
    remove_one,
    replace_one,
    submultisets,
    top_dim,
)
from .gw import _gw
from .memo import EvalContext, MemoCache, default_context

ZERO = Fraction(0)
PUNCTURE = (0, 0, 0)
DILATON = (1, 0, 0)
DIVISOR = (0, 0, 1)

__all__ = [
    "puncture_reduce",
    "dilaton_reduce",
    "divisor_reduce",
    "divisor_lift",
    "trr_reduce",
    "eval_descendant",
]

Terms = list[tuple[Fraction, Canon]]


def _require_untwisted(corr: Correlator) -> None:
    if any(t.m for t in corr.insertions):
        raise InvalidCorrelator("descendant engine needs all m = 0")


def _lowered(ins: Canon) -> Iterator[tuple[int, Canon]]:
    """(count, ins with one u lowered) for each distinct triple with u >= 1."""
    for t, k in grouped(ins):
        if t[0] >= 1:
            yield k, replace_one(ins, t, (t[0] - 1, t[1], t[2]))


def _shifted(ins: Canon) -> Iterator[tuple[int, Canon]]:
    for t, k in grouped(ins):
        if t[0] >= 1:
            yield k, replace_one(ins, t, (t[0] - 1, t[1], t[2] + 1))


# Rewrites on canonical tuples.  The twisted engine reuses them: modified
# psi classes pass through these three equations untouched.


def _puncture(ins: Canon) -> Terms:
    rest = remove_one(ins, PUNCTURE)
    return [(Fraction(k), lower) for k, lower in _lowered(rest)]


def _dilaton(ins: Canon) -> tuple[Fraction, Canon]:
    rest = remove_one(ins, DILATON)
    return Fraction(len(rest) - 2), rest


def _divisor(d: int, ins: Canon) -> Terms:
    rest = remove_one(ins, DIVISOR)
    return [(Fraction(d), rest)] + [(Fraction(k), s) for k, s in _shifted(rest)]


def _lift(d: int, ins: Canon) -> Terms:
    inv = Fraction(1, d)
    return [(inv, add_one(ins, DIVISOR))] + [(-k * inv, s) for k, s in _shifted(ins)]


def _trr(
    r: int, d: int, pivot: tuple, j: tuple, k: tuple, others: Canon, prune: bool
) -> Iterator[tuple[int, int, Canon, int, Canon]]:
    """(weight, d_A, A side, d_B, B side) over stable splittings."""
    head = (pivot[0] - 1, 0, pivot[2])
    b_pair = tuple(sorted((j, k)))
    for chosen, rest, weight in submultisets(others):
        a_base = merge((head,), chosen)
        b_base = merge(b_pair, rest)
        codim_a = sum(u + c for u, _, c in a_base)
        for d_a in range(d + 1):
            if d_a == 0 and len(a_base) < 2:
                continue  # contracted twig with fewer than 3 special points
            if prune:
                e = r * d_a + r + d_a - 3 + len(a_base) + 1 - codim_a
                es = (e,) if 0 <= e <= r else ()
            else:
                es = range(r + 1)
            for e in es:
                yield (
                    weight,
                    d_a,
                    add_one(a_base, (0, 0, e)),
                    d - d_a,
                    add_one(b_base, (0, 0, r - e)),
                )


def _choose_trr(ctx: EvalContext, ins: Canon) -> tuple[int, int, int]:
    n = len(ins)
    if ctx.rng is None:
        top_u = max(t[0] for t in ins)
        p = next(i for i in range(n) if ins[i][0] == top_u)
        j, k = [i for i in range(n) if i != p][:2]
        return p, j, k
    p = ctx.pick([i for i in range(n) if ins[i][0] >= 1])
    rest = [i for i in range(n) if i != p]
    ctx.rng.shuffle(rest)
    return p, rest[0], rest[1]


def _strip_order(ctx: EvalContext, ins: Canon) -> list[tuple]:
    n = len(ins)
    order = [t for t in (PUNCTURE, DILATON) if n >= 2 and t in ins]
    if n >= 4 and DIVISOR in ins:
        order.append(DIVISOR)
    if ctx.rng is not None:
        ctx.rng.shuffle(order)
    return order


def _apply(ctx: EvalContext, r: int, d: int, terms: Terms, value) -> Fraction:
    total = ZERO
    for coef, ins in terms:
        if coef:
            total += coef * value(ctx, r, d, ins)
    return total


def _desc(ctx: EvalContext, r: int, d: int, ins: Canon) -> Fraction:
    if any(t[2] > r for t in ins) or not top_dim(r, d, ins):
        return ZERO
    if d == 0:
        return _degree_zero(r, ins)
    if all(t[0] == 0 for t in ins):
        return _gw(ctx, r, d, ins)

    key = CanonicalKey(r, d, ins)
    value = ctx.cache.get(key)
    if value is not None:
        return value

    order = _strip_order(ctx, ins)
    if order:
        t = order[0]
        if t == PUNCTURE:
            value = _apply(ctx, r, d, _puncture(ins), _desc)
        elif t == DILATON:
            coef, rest = _dilaton(ins)
            value = coef * _desc(ctx, r, d, rest) if coef else ZERO
        else:
            value = _apply(ctx, r, d, _divisor(d, ins), _desc)
    elif len(ins) >= 3:
        p, j, k = _choose_trr(ctx, ins)
        others = tuple(t for i, t in enumerate(ins) if i not in (p, j, k))
        value = ZERO
        for weight, d_a, a_side, d_b, b_side in _trr(r, d, ins[p], ins[j], ins[k], others, True):
            left = _desc(ctx, r, d_a, a_side)
            if left:
                value += weight * left * _desc(ctx, r, d_b, b_side)
    else:
        value = _apply(ctx, r, d, _lift(d, ins), _desc)
    ctx.cache.put(key, value)
    return value


# -- public surface on Correlator objects ----------------------------------


def _wrap(corr: Correlator, terms: Terms) -> list[tuple[Fraction, Correlator]]:
    return [(coef, Correlator(corr.r, corr.d, ins)) for coef, ins in terms]


def puncture_reduce(corr: Correlator) -> list[tuple[Fraction, Correlator]]:
    """Remove one ``tau_0(0)`` mark: a sum lowering each other ``u`` once."""
    canon = corr.canon()
    if PUNCTURE not in canon:
        raise InvalidCorrelator("no tau_0(0) mark to remove")
    if corr.n < 2:
        raise InvalidCorrelator("puncture equation needs another mark")
    return _wrap(corr, _puncture(canon))


def dilaton_reduce(corr: Correlator) -> tuple[Fraction, Correlator]:
    """Remove one ``tau_1(0)`` mark; the coefficient is ``n - 2``."""
    _require_untwisted(corr)
    canon = corr.canon()
    if DILATON not in canon:
        raise InvalidCorrelator("no tau_1(0) mark to remove")
    coef, rest = _dilaton(canon)
    return coef, Correlator(corr.r, corr.d, rest)


def divisor_reduce(corr: Correlator) -> list[tuple[Fraction, Correlator]]:
    """Remove one ``tau_0(1)`` mark.

    Shift terms whose hyperplane exponent exceeds ``r`` are kept; they
    evaluate to zero.
    """
    canon = corr.canon()
    if DIVISOR not in canon:
        raise InvalidCorrelator("no tau_0(1) mark to remove")
    if corr.n < 2:
        raise InvalidCorrelator("divisor equation needs another mark")
    return _wrap(corr, _divisor(corr.d, canon))


def divisor_lift(corr: Correlator) -> list[tuple[Fraction, Correlator]]:
    """Express ``corr`` through a correlator with one more ``tau_0(1)`` mark.

    This is the divisor equation solved for its ``d * <...>`` term, so the
    coefficients carry ``1/d``.
    """
    _require_untwisted(corr)
    if corr.d == 0:
        raise InvalidCorrelator("cannot lift a degree-0 correlator (divides by d)")
    return _wrap(corr, _lift(corr.d, corr.canon()))


def trr_reduce(
    corr: Correlator, pivot: int, spectators: tuple[int, int], prune: bool = False
) -> list[tuple[int, Correlator, Correlator]]:
    """Topological recursion at mark ``pivot`` with ``spectators`` on the B twig.

    Returns ``(weight, A side, B side)``; the value of ``corr`` is the sum
    of ``weight * value(A) * value(B)``.  Indices refer to
    ``corr.insertions``.
    """
    _require_untwisted(corr)
    n = corr.n
    j, k = spectators
    if n < 3:
        raise InvalidCorrelator("topological recursion needs three marks")
    if len({pivot, j, k}) != 3 or not all(0 <= i < n for i in (pivot, j, k)):
        raise InvalidCorrelator("pivot and spectators must be distinct marks")
    ins = corr.insertions
    if ins[pivot].u < 1:
        raise InvalidCorrelator("pivot mark needs u >= 1")
    others = tuple(sorted(tuple(t) for i, t in enumerate(ins) if i not in (pivot, j, k)))
    return [
        (weight, Correlator(corr.r, d_a, a_side), Correlator(corr.r, d_b, b_side))
        for weight, d_a, a_side, d_b, b_side in _trr(
            corr.r, corr.d, tuple(ins[pivot]), tuple(ins[j]), tuple(ins[k]), others, prune
        )
    ]


def eval_descendant(
    corr: Correlator, cache: Optional[MemoCache] = None, ctx: Optional[EvalContext] = None
) -> Fraction:
    corr.check()
    _require_untwisted(corr)
    ctx = ctx or default_context(cache)
    return _desc(ctx, corr.r, corr.d, corr.canon())
