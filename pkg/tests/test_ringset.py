import itertools

import pytest
from hypothesis import given, strategies as st

from stablecut.errors import ContractError, InputError, ResourceError
from stablecut.ringset import RingCode, pack_members, pack_members_unit

X1, X2 = "w1:1", "w2:1"  # inner nodes of the two girl-paths of I2


def test_trivial_sets_are_members():
    ring = RingCode(["s", "a", "t"], "s", "t", [("a", "s")])
    assert ring.is_member(set())
    assert ring.is_member({"s", "a", "t"})
    assert not ring.is_member({"a"})
    with pytest.raises(InputError):
        ring.is_member({"zz"})


def test_i2_membership(i2):
    ring = i2.digraph.ring
    assert ring.is_member({"s*"})
    assert not ring.is_member({"s*", X1})
    assert ring.is_member({"s*", X1, X2})


def test_i2_code_arcs(i2):
    arcs = i2.digraph.ring.code_arcs()
    assert {(X1, X2), (X2, X1), (X1, "s*"), (X2, "s*")} <= arcs
    assert {("t*", v) for v in ("s*", X1, X2)} <= arcs


def test_discrete_code_keeps_only_forced_arcs():
    # codes always hold the source, and the sink's code is the ground set
    ring = RingCode.from_code(["s", "a", "t"], "s", "t", {"s": {"s"}, "a": {"a"}, "t": {"t"}})
    assert ring.code_arcs() == {("a", "s"), ("t", "s"), ("t", "a")}
    with pytest.raises(InputError):
        RingCode.from_code(["s", "a", "t"], "s", "t", {"s": {"s", "a"}, "a": {"a", "t"}, "t": {"t"}})


def test_smallest_member_examples(i2):
    ring = i2.digraph.ring
    assert ring.smallest_member_containing({"s*"}) == {"s*"}
    assert ring.smallest_member_containing({"s*", X1}) == {"s*", X1, X2}
    assert ring.smallest_member_containing({"t*"}) is None


def test_member_enumeration_bound(i3):
    assert len(i3.digraph.ring.members()) == 3
    with pytest.raises(ResourceError):
        i3.digraph.ring.members(limit=1)


@st.composite
def rings(draw):
    k = draw(st.integers(0, 8))
    ground = ["s"] + [f"v{i}" for i in range(k)] + ["t"]
    pairs = [(u, v) for u in ground for v in ground if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), max_size=12)) if pairs else []
    return RingCode(ground, "s", "t", arcs)


def _all_members(ring):
    inner = [v for v in ring.ground if v not in (ring.source, ring.sink)]
    out = []
    for r in range(len(inner) + 1):
        for combo in itertools.combinations(inner, r):
            z = frozenset((ring.source,) + combo)
            if ring.is_member(z):
                out.append(z)
    return out


@given(rings())
def test_members_closed_under_union_and_intersection(ring):
    members = _all_members(ring)
    assert sorted(members, key=sorted) == sorted(ring.members(), key=sorted)
    found = set(members)
    for a, b in itertools.combinations(members, 2):
        assert a | b in found and a & b in found


@given(rings())
def test_code_is_smallest_member(ring):
    members = _all_members(ring)
    for u in ring.ground:
        c = ring.code[u]
        assert u in c and ring.is_member(c)
        for z in members:
            if u in z:
                assert c <= z
        for v in c:
            assert ring.code[v] <= c


def test_pack_members_on_a_path():
    # members {s} and {s, a} use different arcs, so the blocker needs both
    ring = RingCode(["s", "a", "t"], "s", "t", [])
    chain, blocker, value = pack_members({"x": ("s", "a"), "y": ("a", "t")}, {"x": 2, "y": 3}, ring)
    assert value == 5 and blocker == ("x", "y")
    assert chain == [({"s"}, 2), ({"s", "a"}, 3)]
    chain, blocker, q = pack_members_unit({"x": ("s", "a"), "y": ("a", "t")}, ring)
    assert q == 2 and len(blocker) == 2


def test_pack_members_without_members_is_zero():
    ring = RingCode(["s", "t"], "s", "t", [("s", "t")])
    chain, blocker, value = pack_members({"x": ("s", "t")}, {"x": 1}, ring)
    assert value == 0 and chain == [] and blocker == ()


def test_pack_members_needs_a_finite_blocker():
    ring = RingCode(["s", "a", "t"], "s", "t", [])
    with pytest.raises(ContractError):
        pack_members({"x": ("s", "a")}, {"x": 1}, ring)


@given(st.integers(1, 7), st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=25))
def test_code_matches_reachability(k, pairs):
    ground = ["s", "t"] + [f"v{i}" for i in range(k)]
    name = lambda i: ground[i % len(ground)]
    ring = RingCode(ground, "s", "t", [(name(a), name(b)) for a, b in pairs if a != b])
    full = frozenset(ground)
    for u in ground:
        c = ring.closure({u, "s"})
        assert ring.code[u] == (full if u == "t" or "t" in c else c)
