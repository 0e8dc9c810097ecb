import itertools

import pytest
from hypothesis import given

from stablecut import oracle
from stablecut.core import (
    ContractError,
    Edge,
    InputError,
    PreferenceSystem,
    extend_to_stable,
    gale_shapley,
    is_stable,
    join,
    meet,
    reduce_to_core,
)
from stablecut.oracle import I2_MB, I2_MG, I3_M0, I3_M1, I3_M2

from conftest import instances


def test_gale_shapley_fixtures():
    g1, g2, g3 = oracle.fixture_i1(), oracle.fixture_i2(), oracle.fixture_i3()
    assert gale_shapley(g1, "boys") == gale_shapley(g1, "girls") == {"u1w1"}
    assert gale_shapley(g2, "boys") == I2_MB
    assert gale_shapley(g2, "girls") == I2_MG
    assert gale_shapley(g3, "boys") == I3_M0


def test_gale_shapley_rejects_bad_side():
    with pytest.raises(InputError):
        gale_shapley(oracle.fixture_i1(), "nobody")


def test_is_stable_examples():
    g2 = oracle.fixture_i2()
    assert is_stable(g2, I2_MB)
    assert not is_stable(g2, {"u1w1"})
    assert not is_stable(oracle.fixture_i1(), set())
    with pytest.raises(InputError):
        is_stable(g2, {"nope"})


def test_preference_system_validation():
    with pytest.raises(InputError):
        PreferenceSystem(["u"], ["w"], [Edge("e", "u", "w")], {"u": ["e"], "w": []})
    with pytest.raises(InputError):
        PreferenceSystem(["u"], ["u"], [], {})
    with pytest.raises(InputError):
        PreferenceSystem(["u"], ["w"], [Edge("e", "u", "w"), Edge("e", "u", "w")], {"u": ["e"], "w": ["e"]})


def test_parallel_edges_are_supported():
    g = PreferenceSystem(
        ["u"], ["w"], [Edge("a", "u", "w"), Edge("b", "u", "w")], {"u": ["a", "b"], "w": ["b", "a"]}
    )
    assert oracle.enumerate_stable(g) == [frozenset({"a"}), frozenset({"b"})]
    core = reduce_to_core(g)
    assert core.stable_edges == {"a", "b"}
    assert core.girl_best_matching == {"b"}


def test_reduce_examples(i1, i2, i3):
    assert i1.stable_edges == {"u1w1"}
    assert len(i2.system.edges) == 4 and i2.stable_edges == {e.id for e in i2.system.edges}
    assert i2.m_e["u2w1"] == I2_MG and i2.m_e["u1w1"] == I2_MB
    assert len(i3.stable_edges) == 9


def test_extend_examples(i2, i3):
    assert extend_to_stable(i2, {"u1w1"}) == I2_MB
    assert extend_to_stable(i2, set()) == I2_MG
    assert extend_to_stable(i3, {"u1w1", "u2w3"}) is None
    with pytest.raises(InputError):
        extend_to_stable(i2, {"u1w1", "u1w2"})


def test_meet_join_examples(i2, i3):
    assert meet(i2, I2_MB, I2_MG) == I2_MG
    assert join(i2, I2_MB, I2_MG) == I2_MB
    for m in (I3_M0, I3_M1, I3_M2):
        assert meet(i3, m, m) == join(i3, m, m) == m
    assert meet(i3, I3_M0, I3_M2) == I3_M2
    with pytest.raises(ContractError):
        meet(i2, {"u1w1"}, I2_MG)


@given(instances(max_side=6))
def test_reduction_preserves_stable_matchings(g):
    core = reduce_to_core(g)
    family = oracle.enumerate_stable(g)
    assert oracle.enumerate_stable(core.system) == family
    assert core.stable_edges == frozenset().union(*family)
    for m in family:
        assert len(m) == core.n  # every stable matching of the core is perfect
    for e, m in core.m_e.items():
        assert e in m and is_stable(g, m)
        assert all(not (e in other) or _girl_better_or_equal(core, m, other) for other in family)


def _girl_better_or_equal(core, m, other):
    g = core.system
    pm, po = g.partner_edge(m), g.partner_edge(other)
    return all(not g.prefers(w, po[w], pm[w]) for w in g.girls)


@given(instances(max_side=6))
def test_girl_proposing_is_girl_optimal(g):
    best = gale_shapley(g, "girls")
    for m in oracle.enumerate_stable(g):
        pb, pm = g.partner_edge(best), g.partner_edge(m)
        for w in g.girls:
            if w in pm:
                assert w in pb and not g.prefers(w, pm[w], pb[w])


@given(instances(max_side=5))
def test_lattice_laws(g):
    core = reduce_to_core(g)
    family = oracle.enumerate_stable(g)
    for a, b in itertools.product(family, repeat=2):
        assert meet(core, a, b) == meet(core, b, a) in family
        assert join(core, a, b) == join(core, b, a) in family
        assert meet(core, a, join(core, a, b)) == a
        assert join(core, a, meet(core, a, b)) == a
    for a, b, c in itertools.islice(itertools.product(family, repeat=3), 200):
        assert meet(core, a, join(core, b, c)) == join(core, meet(core, a, b), meet(core, a, c))
        assert meet(core, meet(core, a, b), c) == meet(core, a, meet(core, b, c))


@given(instances(max_side=5))
def test_every_matching_is_join_of_witnesses(g):
    core = reduce_to_core(g)
    for m in oracle.enumerate_stable(g):
        if m:
            assert join(core, *[core.m_e[e] for e in m]) == m


@given(instances(max_side=5))
def test_reduction_is_order_independent(g):
    """Deleting dominated edges in reverse node order reaches the same core."""
    alive = {e.id for e in g.edges}
    changed = True
    while changed:
        changed = False
        for s in sorted(g.boys + g.girls, reverse=True):
            best = next((e for e in g.prefs[s] if e in alive), None)
            if best is None:
                continue
            t = g.other(s, best)
            worse = set(g.prefs[t][g.rank[t][best] + 1:]) & alive
            if worse:
                alive -= worse
                changed = True
    assert {e.id for e in reduce_to_core(g).system.edges} == alive
