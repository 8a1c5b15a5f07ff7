import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import correlators
from twistdesc.core import Correlator, InvalidCorrelator, add_one
from twistdesc.descendants import DILATON, DIVISOR, PUNCTURE, _desc, _dilaton, _divisor, _puncture
from twistdesc.memo import EvalContext, MemoCache
from twistdesc.twisted import _twisted, eval_twisted, twisted_reduce, twisted_splittings


def _corr(n):
    return Correlator.of(3, 2, *([(0, 1, 2)] + [(0, 0, 1)] * (n - 1)))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_splitting_count(n):
    splits = twisted_splittings(_corr(n), 0)
    subsets = [s for k in range(1, n) for s in itertools.combinations(range(1, n), k)]
    assert len(splits) == len(subsets) == 2 ** (n - 1) - 1
    for s in splits:
        assert 0 in s.a and len(s.a) >= 2
        assert sorted(s.a + s.b) == list(range(n))
        assert s.m_sum >= 1


def test_splitting_examples():
    assert [s.a for s in twisted_splittings(_corr(2), 0)] == [(0, 1)]
    assert sorted(s.a for s in twisted_splittings(_corr(3), 0)) == [(0, 1), (0, 1, 2), (0, 2)]
    with pytest.raises(InvalidCorrelator):
        twisted_splittings(_corr(3), 1)


def test_sturm_building_block():
    corr = Correlator.of(3, 3, *([(0, 0, 3)] * 5 + [(0, 1, 2)]))
    # every boundary term collapses eta^5 = 0, only the psi term survives
    assert twisted_reduce(corr, 5) == [(1, Correlator.of(3, 3, *([(0, 0, 3)] * 5 + [(1, 0, 2)])))]
    assert eval_twisted(corr) == 1


def test_two_point_expansion():
    corr = Correlator.of(2, 2, (0, 1, 1), (0, 0, 1))
    terms = twisted_reduce(corr, 0)
    assert sorted(terms) == sorted([
        (1, Correlator.of(2, 2, (0, 0, 1), (1, 0, 1))),
        (-1, Correlator.of(2, 2, (0, 0, 2))),
    ])


@pytest.mark.parametrize("r,d", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_single_mark_is_ordinary(r, d):
    for m in range(0, (r + 1) * d + r):
        c = (r + 1) * d + r - 2 - m
        if 0 <= c <= r:
            for u in range(m + 1):
                assert eval_twisted(Correlator.of(r, d, (u, m - u, c))) == eval_twisted(
                    Correlator.of(r, d, (m, 0, c))
                )


def test_degree_zero_twisted_rejected():
    with pytest.raises(InvalidCorrelator):
        eval_twisted(Correlator.of(2, 0, (0, 1, 0), (0, 0, 1), (0, 0, 1)))


@given(correlators(twisted=True, min_n=2))
def test_measure_decreases(case):
    r, d, ins = case
    if not any(m for _, m, _ in ins):
        return
    corr = Correlator.of(r, d, *ins)
    pivot = next(i for i, t in enumerate(corr.insertions) if t.m)
    total = sum(t.m for t in corr.insertions)
    for _, term in twisted_reduce(corr, pivot):
        assert sum(t.m for t in term.insertions) == total - 1


@given(correlators(twisted=True), st.integers(0, 2**31))
def test_pivot_independence(case, seed):
    r, d, ins = case
    fixed = _twisted(EvalContext(MemoCache()), r, d, ins)
    shuffled = _twisted(EvalContext(MemoCache(), random.Random(seed)), r, d, ins)
    assert fixed == shuffled


@given(correlators(twisted=True), st.data())
def test_every_pivot_reduces_to_the_same_value(case, data):
    r, d, ins = case
    pivots = [i for i, t in enumerate(ins) if t[1]]
    if len(ins) < 2 or not pivots:
        return
    cache = MemoCache()
    corr = Correlator.of(r, d, *ins)
    p = data.draw(st.sampled_from(pivots))
    total = sum((c * eval_twisted(t, cache) for c, t in twisted_reduce(corr, p)), Fraction(0))
    assert total == eval_twisted(corr, cache)


def _ev(ctx, r, d, terms):
    return sum((c * _twisted(ctx, r, d, t) for c, t in terms), Fraction(0))


@given(correlators(twisted=True, excess=1, max_n=5))
def test_twisted_puncture(case):
    r, d, ins = case
    ctx = EvalContext(MemoCache())
    big = add_one(ins, PUNCTURE)
    assert _twisted(ctx, r, d, big) == _ev(ctx, r, d, _puncture(big))


@given(correlators(twisted=True, max_n=5))
def test_twisted_dilaton(case):
    r, d, ins = case
    ctx = EvalContext(MemoCache())
    big = add_one(ins, DILATON)
    coef, rest = _dilaton(big)
    assert _twisted(ctx, r, d, big) == coef * _twisted(ctx, r, d, rest)


@given(correlators(twisted=True, max_n=5))
def test_twisted_divisor(case):
    r, d, ins = case
    ctx = EvalContext(MemoCache())
    big = add_one(ins, DIVISOR)
    assert _twisted(ctx, r, d, big) == _ev(ctx, r, d, _divisor(d, big))


@given(correlators())
def test_agrees_with_descendant_engine(case):
    r, d, ins = case
    assert _twisted(EvalContext(MemoCache()), r, d, ins) == _desc(EvalContext(MemoCache()), r, d, ins)


@given(correlators(twisted=True), st.randoms(use_true_random=False))
def test_permutation_invariance(case, rnd):
    r, d, ins = case
    marks = list(ins)
    rnd.shuffle(marks)
    assert eval_twisted(Correlator.of(r, d, *marks), MemoCache()) == eval_twisted(
        Correlator.of(r, d, *ins), MemoCache()
    )
