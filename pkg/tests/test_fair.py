import random

import pytest
from hypothesis import given, strategies as st

from stablecut import oracle
from stablecut.core import reduce_to_core
from stablecut.errors import InputError
from stablecut.fair import (
    fair_stable_matching,
    level_count_vector,
    rank_levels,
    validate_levels,
    worst_edge_minimizer,
)
from stablecut.oracle import I3_M0, I3_M1

from conftest import instances


def test_fair_examples(i1, i2, i3):
    m, sig = fair_stable_matching(i1, rank_levels(i1))
    assert m == {"u1w1"} and sum(sig.counts) == 2 and len(sig.levels) in (1, 2)
    m, sig = fair_stable_matching(i2, rank_levels(i2))
    assert level_count_vector(i2, rank_levels(i2), m)[0] == 2
    m, sig = fair_stable_matching(i3, rank_levels(i3))
    assert m == I3_M1 and sig.levels == (2,) and sig.counts == (6,)


def test_count_vectors(i1, i3):
    assert level_count_vector(i1, rank_levels(i1), {"u1w1"})[0] == 2
    assert level_count_vector(i3, rank_levels(i3), I3_M1)[:3] == (0, 6, 0)
    assert level_count_vector(i3, rank_levels(i3), I3_M0)[:3] == (3, 0, 3)


def test_worst_edge_examples(i1, i2, i3):
    assert worst_edge_minimizer(i3) == (I3_M1, 0)
    assert worst_edge_minimizer(i2)[1] == 2
    assert worst_edge_minimizer(i1) == ({"u1w1"}, 2)


def test_malformed_levels(i2):
    good = rank_levels(i2)
    for bad in (
        {k: v for k, v in good.items() if k != ("u1", "u1w1")},
        {**good, ("u1", "u1w1"): 0},
        {**good, ("u1", "u1w1"): 1},
        {**good, ("u1", "u2w2"): 1},
    ):
        with pytest.raises(InputError):
            validate_levels(i2, bad)
    assert validate_levels(i2, good) == good


@given(instances(max_side=5), st.integers(0, 10**6))
def test_fair_matches_oracle(g, seed):
    core = reduce_to_core(g)
    if core.n == 0:
        return
    rng = random.Random(seed)
    levels = {}
    for v in g.prefs:
        order = [e for e in g.prefs[v] if e in core.stable_edges]
        values = sorted(rng.sample(range(1, 2 * len(order) + 3), len(order)), reverse=True)
        levels.update({(v, e): x for e, x in zip(order, values)})
    m, sig = fair_stable_matching(core, levels)
    family = oracle.enumerate_stable(g)
    top = max([2 * len(core.stable_edges)] + list(levels.values()))
    assert m in family
    best = oracle.brute_lex_fair(g, family, levels, top)
    assert level_count_vector(core, levels, m) == best
    assert sum(sig.counts) == 2 * core.n
    assert all(best[lam - 1] == k for lam, k in zip(sig.levels, sig.counts))
