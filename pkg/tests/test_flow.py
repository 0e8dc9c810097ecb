import itertools

import pytest
from hypothesis import given, strategies as st

from stablecut.errors import InfeasibleError, InputError
from stablecut.flow import (
    INF,
    Arc,
    Flow,
    FlowNetwork,
    b_matching_max,
    decompose_into_path_flows,
    max_flow_min_cut,
    min_cost_flow,
    min_cost_flow_unit_costs,
    shortest_path_dijkstra,
)


def net(arcs, nodes=None):
    arcs = [Arc(*a) for a in arcs]
    nodes = nodes or sorted({a.tail for a in arcs} | {a.head for a in arcs} | {"s", "t"})
    return FlowNetwork(nodes, arcs, "s", "t")


def test_dijkstra_examples(i2):
    dist, _ = shortest_path_dijkstra(net([("a", "s", "t", INF, 3)]))
    assert dist["t"] == 3
    dist, _ = shortest_path_dijkstra(net([("a", "s", "b", INF, 0), ("b", "b", "t", INF, 0)]))
    assert set(dist.values()) == {0}
    d = i2.digraph
    arcs = [Arc(e, *d.stable_arcs[e], INF, 1) for e in sorted(d.stable_arcs)]
    arcs += [Arc(("c", u, v), u, v, INF, 0) for u, v in d.ring.useful_arcs()]
    dist, _ = shortest_path_dijkstra(FlowNetwork(d.nodes, arcs, d.source, d.sink))
    assert dist["t*"] == 2


def test_max_flow_examples(i2):
    flow, shore = max_flow_min_cut(net([("a", "s", "t", 5)]))
    assert flow.amount == 5 and shore == {"s"}
    flow, _ = max_flow_min_cut(net([("a", "s", "t", 2), ("b", "s", "t", 3)]))
    assert flow.amount == 5
    d = i2.digraph
    c = {"u1w1": 5, "u1w2": 1, "u2w1": 1, "u2w2": 1}
    flow, shore = max_flow_min_cut(
        FlowNetwork(d.nodes, [Arc(e, *d.stable_arcs[e], c[e]) for e in sorted(d.stable_arcs)], "s*", "t*")
    )
    assert flow.amount == 2 and shore == {"s*"}


def test_unit_cost_flow_examples():
    path = net([("a", "s", "m", 1, 1), ("b", "m", "t", 1, 1)])
    z, pi = min_cost_flow_unit_costs(path, 2)
    assert pi["t"] == 2 and z.amount == 1
    z, pi = min_cost_flow_unit_costs(net([("a", "s", "t", 4, 1)]), 1)
    assert z.amount == 4
    with pytest.raises(InfeasibleError):
        min_cost_flow_unit_costs(net([("a", "s", "t", INF, 1)]), 2)


def test_b_matching_examples():
    z, (left, right) = b_matching_max([("e", "x", "y")], {"x": 1}, {"y": 1})
    assert z == {"e": 1} and len(left) + len(right) == 1
    z, (left, right) = b_matching_max([("e", "x", "y")], {"x": 0}, {"y": 0})
    assert not any(z.values()) and len(left) + len(right) == 1  # a zero-weight cover


def test_decomposition_examples():
    n = net([("a", "s", "m", 1), ("b", "m", "t", 1)])
    assert decompose_into_path_flows(n, Flow({}, 0)) == []
    assert decompose_into_path_flows(n, Flow({"a": 1, "b": 1}, 1)) == [(("a", "b"), 1)]
    with pytest.raises(InputError):
        decompose_into_path_flows(n, Flow({"a": 1}, 1))


@st.composite
def networks(draw, costs=(0, 1)):
    k = draw(st.integers(0, 6))
    nodes = ["s"] + [f"v{i}" for i in range(k)] + ["t"]
    pairs = [(u, v) for u in nodes for v in nodes if u != v and u != "t" and v != "s"]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=14))
    arcs = []
    for i, (u, v) in enumerate(chosen):
        cap = draw(st.one_of(st.integers(0, 4), st.just(INF)))
        arcs.append(Arc(i, u, v, cap, draw(st.sampled_from(costs))))
    return FlowNetwork(nodes, arcs, "s", "t")


def _cut(n, z):
    return sum(a.capacity for a in n.arcs if a.tail in z and a.head not in z)


@given(networks())
def test_max_flow_equals_min_cut(n):
    inner = [v for v in n.nodes if v not in ("s", "t")]
    best = min(
        _cut(n, frozenset(("s",) + combo))
        for r in range(len(inner) + 1)
        for combo in itertools.combinations(inner, r)
    )
    if best == INF:
        with pytest.raises(InfeasibleError):
            max_flow_min_cut(n)
        return
    flow, shore = max_flow_min_cut(n)
    assert flow.is_conserving(n) and flow.amount == best == _cut(n, shore)
    for a in n.arcs:
        assert 0 <= flow[a.id] <= a.capacity
    # the returned shore is the smallest minimizer
    for r in range(len(inner) + 1):
        for combo in itertools.combinations(inner, r):
            z = frozenset(("s",) + combo)
            if _cut(n, z) == best:
                assert shore <= z


@given(networks(), st.integers(1, 3))
def test_unit_cost_flow_satisfies_f1_f2(n, ell):
    try:
        z, pi = min_cost_flow_unit_costs(n, ell, final_phase=False)
    except InfeasibleError:
        return
    assert z.is_conserving(n) and pi["s"] == 0
    for a in n.arcs:
        drop = pi[a.head] - pi[a.tail]
        if a.cost > drop:
            assert z[a.id] == 0
        if a.cost < drop:
            assert z[a.id] == a.capacity


@given(networks(costs=(-2, -1, 0, 1, 3)))
def test_general_min_cost_flow_labels(n):
    n = FlowNetwork(n.nodes, [Arc(a.id, a.tail, a.head, 1 if a.capacity == INF else a.capacity, a.cost) for a in n.arcs], "s", "t")
    try:
        z, p = min_cost_flow(n)
    except InputError:
        return  # negative cycle
    assert z.is_conserving(n)
    for a in n.arcs:
        reduced = a.cost + p[a.tail] - p[a.head]
        if z[a.id] < a.capacity:
            assert reduced >= 0
        if z[a.id] > 0:
            assert reduced <= 0


@given(networks())
def test_decomposition_resums(n):
    try:
        flow, _ = max_flow_min_cut(n)
    except InfeasibleError:
        return
    paths = decompose_into_path_flows(n, flow)
    total = {}
    for path, k in paths:
        for a in path:
            total[a] = total.get(a, 0) + k
    cyc = {a: flow[a] - total.get(a, 0) for a in flow.values}
    assert all(v >= 0 for v in cyc.values())
    assert sum(k for _, k in paths) == flow.amount
    assert len(paths) <= sum(1 for v in flow.values.values() if v)


@given(
    st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=10, unique=True),
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
    st.lists(st.integers(0, 3), min_size=4, max_size=4),
)
def test_b_matching_forest_and_cover(pairs, bl, br):
    edges = [((i, j), ("L", i), ("R", j)) for i, j in pairs]
    bleft = {("L", i): bl[i] for i in range(4)}
    bright = {("R", j): br[j] for j in range(4)}
    z, (cl, cr) = b_matching_max(edges, bleft, bright)
    for node, b in list(bleft.items()) + list(bright.items()):
        assert sum(v for (eid, u, w) in edges for v in [z.get(eid, 0)] if node in (u, w)) <= b
    value = sum(z.values())
    assert value == sum(bleft[x] for x in cl) + sum(bright[x] for x in cr)
    for eid, u, w in edges:
        assert u in cl or w in cr
    # support is a forest: |edges| < |nodes touched| per component
    support = [(u, w) for eid, u, w in edges if z.get(eid, 0) > 0]
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for u, w in support:
        ru, rw = find(u), find(w)
        assert ru != rw
        parent[ru] = rw
