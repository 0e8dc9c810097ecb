import itertools

import pytest
from hypothesis import given

from stablecut import oracle
from stablecut.errors import ResourceError
from stablecut.oracle import I2_MB, I2_MG, I3_M0, I3_M1, I3_M2

from conftest import instances


def test_fixture_families():
    assert oracle.enumerate_stable(oracle.fixture_i1()) == [frozenset({"u1w1"})]
    assert set(oracle.enumerate_stable(oracle.fixture_i2())) == {I2_MB, I2_MG}
    assert set(oracle.enumerate_stable(oracle.fixture_i3())) == {I3_M0, I3_M1, I3_M2}


@given(instances(max_side=4))
def test_backtracking_equals_subset_scan(g):
    ids = [e.id for e in g.edges]
    every = {
        frozenset(s)
        for k in range(len(ids) + 1)
        for s in itertools.combinations(ids, k)
        if oracle.definitely_stable(g, s)
    }
    assert set(oracle.enumerate_stable(g)) == every


def test_brute_helpers():
    family = [I3_M0, I3_M1, I3_M2]
    ones = {e: 1 for m in family for e in m}
    assert oracle.brute_min_blocker(oracle.fixture_i3(), family, ones)[0] == 3
    assert oracle.brute_max_packing(family) == 3
    assert oracle.brute_max_union(family, 2, ones) == 6
    assert oracle.brute_disjoint_min_cost(family, 4, ones) is None
    less = lambda a, b: a < b
    assert oracle.brute_max_antichain(range(4), less) == 1
    assert oracle.brute_max_antichain_union(range(4), less, 3) == 3


def test_random_instances_are_seeded():
    a = oracle.random_instance(4, 5, 0.6, 7)
    b = oracle.random_instance(4, 5, 0.6, 7)
    assert a.prefs == b.prefs and [e.id for e in a.edges] == [e.id for e in b.edges]


def test_bounds():
    with pytest.raises(ResourceError):
        oracle.enumerate_stable(oracle.random_instance(9, 9, 1.0, 0))
