import itertools
import random

import pytest
from hypothesis import given, strategies as st

from stablecut import oracle
from stablecut.core import reduce_to_core
from stablecut.errors import InfeasibleError
from stablecut.flow import INF, Arc, Flow, FlowNetwork
from stablecut.lcut import (
    disjoint_stable_matchings_min_total_cost,
    max_weight_union,
    min_lcut,
    min_lcut_ring_compatible,
    parallel_extension,
)
from stablecut.oracle import I2_MB, I2_MG, I3_M0, I3_M1, I3_M2
from stablecut.optimize import cheapest_stable_matching
from stablecut.ringset import RingCode

from conftest import instances


def path(caps):
    nodes = ["s"] + [f"v{i}" for i in range(1, len(caps))] + ["t"]
    arcs = [Arc(i, nodes[i], nodes[i + 1], c) for i, c in enumerate(caps)]
    return FlowNetwork(nodes, arcs, "s", "t")


def test_min_lcut_examples():
    cert = min_lcut(path([1, 1, 1]), 3)
    assert cert.lcut.capacity == 3 == cert.dual_value and cert.lcut.arcs == {0, 1, 2}
    assert cert.flow.values == {0: 1, 1: 1, 2: 1} and not cert.violations()
    cert = min_lcut(path([1, 5, 1]), 2)
    assert cert.lcut.arcs == {0, 2} and cert.lcut.capacity == 2 and cert.flow.amount == 1
    assert not cert.violations()
    cert = min_lcut(path([4]), 1)
    assert cert.lcut.capacity == 4 and cert.flow.amount == 4
    with pytest.raises(InfeasibleError):
        min_lcut(path([1, 1]), 3)


def test_ring_compatible_examples(i2, i3):
    n = path([2, 3])
    everything = RingCode(n.nodes, "s", "t", [])
    assert min_lcut_ring_compatible(n, everything, 2).lcut.capacity == min_lcut(n, 2).lcut.capacity
    d = i2.digraph
    net = FlowNetwork(d.nodes, [Arc(e, *d.stable_arcs[e], 1) for e in sorted(d.stable_arcs)], "s*", "t*")
    cert = min_lcut_ring_compatible(net, d.ring, 2)
    assert cert.lcut.capacity == 4 and cert.lcut.shores == ({"s*"}, {"s*", "w1:1", "w2:1"})
    d = i3.digraph
    net = FlowNetwork(d.nodes, [Arc(e, *d.stable_arcs[e], 1) for e in sorted(d.stable_arcs)], "s*", "t*")
    cert = min_lcut_ring_compatible(net, d.ring, 3)
    assert cert.lcut.capacity == 9 and not cert.violations()
    assert all(d.ring.is_member(z) for z in cert.lcut.shores)


def test_disjoint_examples(i2, i3):
    c = {"u1w1": 3, "u1w2": -1, "u2w1": 2, "u2w2": 0}
    res = disjoint_stable_matchings_min_total_cost(i2, 2, c)
    assert set(res.matchings) == {I2_MB, I2_MG} and res.cost == 4
    res = disjoint_stable_matchings_min_total_cost(i3, 2, {e: 1 for e in I3_M0})
    assert set(res.matchings) == {I3_M1, I3_M2} and res.cost == 0
    one = disjoint_stable_matchings_min_total_cost(i2, 1, c)
    assert (one.matchings[0], one.cost) == cheapest_stable_matching(i2, c)
    with pytest.raises(InfeasibleError) as info:
        disjoint_stable_matchings_min_total_cost(i2, 3, c)
    assert info.value.certificate.value == 2


def test_union_examples(i2, i3):
    assert max_weight_union(i3, 2, {e: 1 for e in i3.stable_edges}).weight == 6
    assert max_weight_union(i2, 3, {e: 1 for e in i2.stable_edges}).weight == 4
    w = {"u1w1": 4, "u2w2": 0, "u1w2": 1, "u2w1": 1}
    one = max_weight_union(i2, 1, w)
    top = max(w.values())
    assert one.matchings[0] == cheapest_stable_matching(i2, {e: top - v for e, v in w.items()})[0]


def test_parallel_extension_orders(i2):
    system, origin = parallel_extension(i2, 3)
    assert system.prefs["w1"] == ("u2w1", "u2w1~1", "u2w1~2", "u1w1", "u1w1~1", "u1w1~2")
    assert system.prefs["u1"] == ("u1w1~2", "u1w1~1", "u1w1", "u1w2~2", "u1w2~1", "u1w2")
    assert origin["u1w1~2"] == "u1w1"


@st.composite
def small_networks(draw):
    k = draw(st.integers(0, 5))
    nodes = ["s"] + [f"v{i}" for i in range(k)] + ["t"]
    pairs = [(u, v) for u in nodes for v in nodes if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=12))
    arcs = [Arc(i, u, v, draw(st.one_of(st.integers(0, 4), st.just(INF)))) for i, (u, v) in enumerate(chosen)]
    return FlowNetwork(nodes, arcs, "s", "t")


@given(small_networks(), st.integers(1, 3))
def test_min_lcut_matches_exhaustive(net, ell):
    brute = oracle.brute_min_lcut(
        net.nodes, [(a.id, a.tail, a.head, a.capacity) for a in net.arcs], "s", "t", ell
    )
    if brute is None:
        with pytest.raises(InfeasibleError):
            min_lcut(net, ell)
        return
    cert = min_lcut(net, ell)
    assert cert.violations() == []
    assert cert.lcut.capacity == brute


@given(small_networks(), st.integers(1, 3), st.integers(0, 10**6))
def test_weak_duality_for_random_flows(net, ell, seed):
    try:
        cert = min_lcut(net, ell)
    except InfeasibleError:
        return
    rng = random.Random(seed)
    # a random conserving flow: a few random s-t walks with random amounts
    out = {}
    for a in net.arcs:
        out.setdefault(a.tail, []).append(a)
    values = {}
    for _ in range(3):
        v, walk, seen = "s", [], {"s"}
        while v != "t" and out.get(v):
            a = rng.choice(out[v])
            if a.head in seen:
                break
            walk.append(a)
            seen.add(a.head)
            v = a.head
        if v == "t":
            k = rng.randint(1, 5)
            for a in walk:
                values[a.id] = values.get(a.id, 0) + k
    flow = Flow(values, sum(values.get(a.id, 0) for a in net.arcs if a.tail == "s") - sum(
        values.get(a.id, 0) for a in net.arcs if a.head == "s"))
    assert flow.is_conserving(net)
    assert cert.lcut.capacity >= ell * flow.amount - flow.surplus(net)


@given(instances(max_side=5), st.integers(1, 3), st.integers(0, 10**6))
def test_disjoint_matches_oracle(g, ell, seed):
    core = reduce_to_core(g)
    if core.n == 0:
        return
    rng = random.Random(seed)
    c = {e: rng.randint(-2, 5) for e in core.stable_edges}
    family = oracle.enumerate_stable(g)
    best = oracle.brute_disjoint_min_cost(family, ell, c)
    if best is None:
        with pytest.raises(InfeasibleError):
            disjoint_stable_matchings_min_total_cost(core, ell, c)
        return
    res = disjoint_stable_matchings_min_total_cost(core, ell, c)
    assert res.cost == best and not res.certificate.violations()
    assert all(m in family for m in res.matchings)
    assert all(not (a & b) for a, b in itertools.combinations(res.matchings, 2))


@given(instances(max_side=4), st.integers(1, 3), st.integers(0, 10**6))
def test_union_matches_oracle(g, ell, seed):
    core = reduce_to_core(g)
    if core.n == 0:
        return
    rng = random.Random(seed)
    w = {e: rng.randint(0, 5) for e in core.stable_edges}
    family = oracle.enumerate_stable(g)
    res = max_weight_union(core, ell, w)
    assert res.weight == oracle.brute_max_union(family, ell, w)
    assert len(res.matchings) == ell and all(m in family for m in res.matchings)
