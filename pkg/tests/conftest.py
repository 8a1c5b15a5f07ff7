import os
import sys

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from twistdesc.core import dimension  # noqa: E402

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


@st.composite
def correlators(draw, *, twisted=False, psi=True, excess=0, min_n=1, max_n=6, min_d=0, max_r=3):
    """Sorted insertion tuples (r, d, ins) with codimension ``dim + excess``.

    Exponents are spread over the marks one unit at a time, so every
    admissible shape is reachable and shrinking moves toward fewer marks.
    """
    r = draw(st.integers(1, max_r))
    d = draw(st.integers(max(min_d, 1 if twisted else 0), 2))
    n = draw(st.integers(max(min_n, 3 if d == 0 else 1), max_n))
    budget = dimension(r, d, n) + excess
    marks = [[0, 0, 0] for _ in range(n)]
    kinds = ([0] if psi else []) + ([1] if twisted else []) + [2]
    for _ in range(max(budget, 0)):
        i = draw(st.integers(0, n - 1))
        k = draw(st.sampled_from(kinds))
        if k == 2 and marks[i][2] >= r:
            open_ = [j for j in range(n) if marks[j][2] < r]
            if not open_ and len(kinds) == 1:
                break
            if open_:
                i = open_[0]
            else:
                k = kinds[0]
        marks[i][k] += 1
    return r, d, tuple(sorted(tuple(t) for t in marks))
