"""Twisted descendants: correlators with modified psi classes.

For a mark with m >= 1 the modified psi class is psi minus the boundary
divisors that contract a twig carrying that mark.  Expanding one factor
gives

    <tau_{u_1}^{m_1}(c_1) ...>_d
        = <tau_{u_1+1}^{m_1-1}(c_1) ...>_d
          - sum_A  KM(A) * <tau_0^{m_A - 1}(c_A)  prod_{i in B} tau_{u_i}^{m_i}(c_i)>_d

over subsets A of marks containing the pivot with |A| >= 2 (B may be
empty).  KM(A) is the psi integral over the contracted twig,
(n_A - 2)! / prod u_i!, nonzero only when the u_i in A sum to n_A - 2.  The
marks of A collapse to one mark on the remaining curve which inherits their
modified psi exponents (minus the one spent) and hyperplane exponents.

Each step lowers the total modified exponent by one; at zero, or on a
one-pointed space where modified and usual psi agree, the descendant engine
takes over.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import (
    Canon,
    CanonicalKey,
    Correlator,
    InvalidCorrelator,
    add_one,
    multinomial,
    remove_one,
    replace_one,
    submultisets,
    top_dim,
)
from .descendants import _desc
from .memo import EvalContext, MemoCache, default_context

ZERO = Fraction(0)

__all__ = ["SplitTerm", "twisted_splittings", "twisted_reduce", "eval_twisted"]


@dataclass(frozen=True)
class SplitTerm:
    """A partition of the marks: ``a`` holds the pivot, ``b`` the rest."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    m_sum: int
    c_sum: int


def twisted_splittings(corr: Correlator, pivot: int) -> list[SplitTerm]:
    n = corr.n
    ins = corr.insertions
    if not 0 <= pivot < n or ins[pivot].m < 1:
        raise InvalidCorrelator("pivot mark needs m >= 1")
    others = [i for i in range(n) if i != pivot]
    out = []
    for mask in range(1, 1 << len(others)):
        a = tuple(sorted([pivot] + [i for bit, i in enumerate(others) if mask >> bit & 1]))
        b = tuple(i for i in others if i not in a)
        out.append(
            SplitTerm(a, b, sum(ins[i].m for i in a), sum(ins[i].c for i in a))
        )
    return out


def _boundary(r: int, pivot: tuple, others: Canon) -> Iterator[tuple[int, Canon]]:
    """(signed integer coefficient, B side) for the boundary terms.

    Sub-multisets stand in for subsets of marks; the weight counts how many
    label subsets give the same B side.
    """
    pu, pm, pc = pivot
    for chosen, rest, weight in submultisets(others):
        if not chosen:
            continue
        n_a = 1 + len(chosen)
        us = [pu] + [t[0] for t in chosen]
        if sum(us) != n_a - 2:
            continue
        c_sum = pc + sum(t[2] for t in chosen)
        if c_sum > r:
            continue  # eta^c_sum = 0 on P^r
        m_sum = pm + sum(t[1] for t in chosen)
        yield -weight * multinomial(us), add_one(rest, (0, m_sum - 1, c_sum))


def _reduce(r: int, ins: Canon, p: int) -> list[tuple[Fraction, Canon]]:
    pu, pm, pc = ins[p]
    first = replace_one(ins, ins[p], (pu + 1, pm - 1, pc))
    others = remove_one(ins, ins[p])
    return [(Fraction(1), first)] + [
        (Fraction(coef), b_side) for coef, b_side in _boundary(r, ins[p], others)
    ]


def _choose_pivot(ctx: EvalContext, ins: Canon) -> int:
    return ctx.pick([i for i, t in enumerate(ins) if t[1] >= 1])


def _twisted(ctx: EvalContext, r: int, d: int, ins: Canon) -> Fraction:
    # Engines share keys, so a hit is valid whichever engine stored it.
    key = CanonicalKey(r, d, ins)
    value = ctx.cache.get(key)
    if value is not None:
        return value
    if any(t[2] > r for t in ins) or not top_dim(r, d, ins):
        return ZERO
    if all(t[1] == 0 for t in ins):
        return _desc(ctx, r, d, ins)
    if d == 0:
        raise InvalidCorrelator("modified psi classes need degree d > 0")
    if len(ins) == 1:
        u, m, c = ins[0]
        return _desc(ctx, r, d, ((u + m, 0, c),))

    value = ZERO
    for coef, term in _reduce(r, ins, _choose_pivot(ctx, ins)):
        value += coef * _twisted(ctx, r, d, term)
    ctx.cache.put(key, value)
    return value


def twisted_reduce(corr: Correlator, pivot: int) -> list[tuple[Fraction, Correlator]]:
    """One step of the modified-psi recursion at mark ``pivot``.

    Boundary terms whose twig integral vanishes, or whose collapsed
    hyperplane exponent exceeds ``r``, are left out.
    """
    corr.check()
    if corr.d == 0:
        raise InvalidCorrelator("modified psi classes need degree d > 0")
    ins = corr.insertions
    if not 0 <= pivot < corr.n or ins[pivot].m < 1:
        raise InvalidCorrelator("pivot mark needs m >= 1")
    canon = corr.canon()
    p = canon.index(tuple(ins[pivot]))
    return [(coef, Correlator(corr.r, corr.d, t)) for coef, t in _reduce(corr.r, canon, p)]


def eval_twisted(
    corr: Correlator, cache: Optional[MemoCache] = None, ctx: Optional[EvalContext] = None
) -> Fraction:
    corr.check()
    ctx = ctx or default_context(cache)
    return _twisted(ctx, corr.r, corr.d, corr.canon())
