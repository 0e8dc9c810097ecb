"""Ring-sets carried by their codes.

A ring-set over a ground set V with source s and sink t contains the empty
set, V, and a family of s-but-not-t sets closed under union and intersection.
It is stored as a generating digraph: a set Z is a member iff it is trivial,
or it holds s, misses t and no generating arc leaves it.  The code C(u), the
smallest member containing u, is the reachability closure of {u, s}, widened
to V when it reaches t.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from .errors import ContractError, InputError, ResourceError
from .flow import INF, Arc, FlowNetwork, shortest_path_dijkstra


@dataclass(frozen=True)
class RingCode:
    ground: tuple
    source: Hashable
    sink: Hashable
    arcs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        known = set(self.ground)
        if len(known) != len(self.ground):
            raise InputError("duplicate node in ground set")
        if self.source not in known or self.sink not in known or self.source == self.sink:
            raise InputError("source and sink must be distinct ground nodes")
        for u, v in self.arcs:
            if u not in known or v not in known:
                raise InputError(f"code arc ({u!r}, {v!r}) leaves the ground set")

    @classmethod
    def from_code(cls, ground, source, sink, code: Mapping) -> "RingCode":
        """Build from an explicit map u -> C(u) and check the code axioms."""
        arcs = {(u, v) for u, cu in code.items() for v in cu if v != u}
        ring = cls(ground, source, sink, arcs)
        for u in ring.ground:
            if u not in code or u not in code[u]:
                raise InputError(f"code of {u!r} must contain {u!r}")
            for v in code[u]:
                if not set(code[v]) <= set(code[u]):
                    raise InputError(f"code is not closed at {u!r} -> {v!r}")
        return ring

    @cached_property
    def _out(self) -> dict:
        out = {v: [] for v in self.ground}
        for u, v in sorted(self.arcs, key=repr):
            out[u].append(v)
        return out

    def closure(self, seed: Iterable) -> frozenset:
        """Nodes reachable from ``seed`` along generating arcs."""
        seen = set(seed)
        queue = deque(seen)
        out = self._out
        while queue:
            u = queue.popleft()
            for v in out[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)

    def _components(self) -> list:
        """Strongly connected components, each listed after every component
        it reaches (iterative Tarjan)."""
        out = self._out
        index, low, on_stack = {}, {}, set()
        stack, found = [], []
        counter = 0
        for root in self.ground:
            if root in index:
                continue
            work = [(root, 0)]
            while work:
                u, i = work.pop()
                if i == 0:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack.add(u)
                succ = out[u]
                while i < len(succ):
                    v = succ[i]
                    i += 1
                    if v not in index:
                        work.append((u, i))
                        work.append((v, 0))
                        break
                    if v in on_stack:
                        low[u] = min(low[u], index[v])
                else:
                    if low[u] == index[u]:
                        comp = []
                        while True:
                            v = stack.pop()
                            on_stack.discard(v)
                            comp.append(v)
                            if v == u:
                                break
                        found.append(comp)
                    if work:
                        parent = work[-1][0]
                        low[parent] = min(low[parent], low[u])
        return found

    @cached_property
    def code(self) -> dict:
        """Map u -> C(u)."""
        full = frozenset(self.ground)
        base = self.closure([self.source])
        if self.sink in base:
            return {u: full for u in self.ground}
        reach = {}
        for comp in self._components():
            acc = set(comp)
            for u in comp:
                for v in self._out[u]:
                    if v not in acc:
                        acc |= reach[v]
            closed = frozenset(acc)
            for u in comp:
                reach[u] = closed
        result = {}
        for u in self.ground:
            c = reach[u] | base
            result[u] = full if u == self.sink or self.sink in c else c
        return result

    def is_member(self, z: Iterable) -> bool:
        z = frozenset(z)
        if not z <= set(self.ground):
            raise InputError("set is not inside the ground set")
        if not z or len(z) == len(self.ground):
            return True
        if self.source not in z or self.sink in z:
            return False
        return all(v in z for u in z for v in self._out[u])

    def code_arcs(self) -> frozenset:
        return frozenset((u, v) for u, cu in self.code.items() for v in cu if v != u)

    def smallest_member_containing(self, seed: Iterable):
        """Smallest nontrivial member holding ``seed``, or ``None`` if only V does."""
        seed = frozenset(seed)
        if not seed:
            return frozenset()
        if self.sink in seed:
            return None
        c = self.closure(seed | {self.source})
        return None if self.sink in c else c

    def members(self, limit: int = 100000) -> list:
        """All nontrivial members, in a deterministic order (small rings only)."""
        code = self.code
        below = {v: set() for v in self.ground}
        for u, cu in code.items():
            for v in cu:
                below[v].add(u)
        start_in = code[self.source]
        if self.sink in start_in:
            return []
        start_out = frozenset(below[self.sink])
        order = list(self.ground)
        found = []

        def grow(inside, outside, k):
            while k < len(order) and (order[k] in inside or order[k] in outside):
                k += 1
            if k == len(order):
                found.append(inside)
                if len(found) > limit:
                    raise ResourceError(f"more than {limit} ring members")
                return
            u = order[k]
            grow(inside | code[u], outside, k + 1)
            grow(inside, outside | below[u], k + 1)

        grow(frozenset(start_in), start_out, 0)
        return found

    def restrict(self, extra_arcs: Iterable) -> "RingCode":
        """Sub-ring whose members also have no leaving arc from ``extra_arcs``."""
        extra = {(u, v) for u, v in extra_arcs if u != v and u != self.sink and v != self.source}
        return RingCode(self.ground, self.source, self.sink, self.arcs | extra)

    def useful_arcs(self):
        """Generating arcs that can leave some s-but-not-t set."""
        return sorted(
            ((u, v) for u, v in self.arcs if u != v and u != self.sink and v != self.source),
            key=repr,
        )


def pack_members(arcs: Mapping, bounds: Mapping, ring: RingCode):
    """Max h-independent family of ring members versus min h-blocker.

    ``arcs`` maps arc ids to ``(tail, head)`` pairs of an s-t digraph on the
    ground set and ``bounds`` maps arc ids to non-negative ints h.  A member Z
    uses the arcs leaving it; a blocker is a set of arcs meeting every
    nontrivial member.  Returns ``(chain, blocker, value)`` where ``chain`` is
    a list of ``(member, multiplicity)`` with nested members, ``blocker`` a
    tuple of arc ids, and the multiplicities sum to the h-value of the blocker.
    """
    nodes = ring.ground
    net_arcs = [Arc(("a", k), *arcs[k], INF, _bound(bounds, k)) for k in sorted(arcs, key=repr)]
    net_arcs += [Arc(("c", u, v), u, v, INF, 0) for u, v in ring.useful_arcs()]
    net = FlowNetwork(nodes, net_arcs, ring.source, ring.sink)
    dist, parent = shortest_path_dijkstra(net)
    top = dist[ring.sink]
    if top == INF:
        raise ContractError("sink unreachable: no finite blocker exists")
    blocker = []
    v = ring.sink
    while v != ring.source:
        arc = net.arc_by_id[parent[v]]
        if arc.id[0] == "a":
            blocker.append(arc.id[1])
        v = arc.tail
    blocker.reverse()
    levels = sorted({min(d, top) for d in dist.values()})
    chain = []
    for low, high in zip(levels, levels[1:]):
        member = frozenset(u for u in nodes if dist[u] <= low)
        chain.append((member, high - low))
    return chain, tuple(blocker), top


def _bound(bounds, k):
    h = bounds[k]
    if not isinstance(h, int) or h < 0:
        raise InputError(f"bound for {k!r} must be a non-negative int")
    return h


def pack_members_unit(arcs: Mapping, ring: RingCode):
    """Two-phase greedy for h = 1: a chain of arc-disjoint members and a path.

    Phase one grows members V_1, V_2, ... where V_{i+1} is the smallest member
    containing V_i and the heads of all arcs leaving V_i.  Phase two walks back
    from the sink and collects exactly one arc per level.
    """
    out = {v: [] for v in ring.ground}
    for k in sorted(arcs, key=repr):
        u, v = arcs[k]
        out[u].append((k, v))
    code_out = ring._out
    start = ring.smallest_member_containing([ring.source])
    if start is None:
        raise ContractError("ring has no nontrivial member")
    parent = _bfs_parents([ring.source], code_out, frozenset())
    current = frozenset(start)
    chain = []
    while True:
        chain.append((current, 1))
        frontier = {}
        for u in sorted(current, key=repr):
            for k, v in out[u]:
                if v not in current and v not in frontier:
                    frontier[v] = (u, k)
        grown = _bfs_parents(list(frontier), code_out, current)
        for v, (u, k) in frontier.items():
            grown[v] = (u, k)
        parent.update(grown)
        if ring.sink in grown or not grown:
            break
        current = current | frozenset(grown)
    if ring.sink not in parent:
        raise ContractError("sink unreachable: no finite blocker exists")
    blocker = []
    v = ring.sink
    while v != ring.source:
        u, k = parent[v]
        if k is not None:
            blocker.append(k)
        v = u
    blocker.reverse()
    return chain, tuple(blocker), len(chain)


def _bfs_parents(roots, out, skip):
    """BFS along generating arcs avoiding ``skip``; parent entries (u, None)."""
    parent = {}
    seen = set(roots) | set(skip)
    queue = deque(roots)
    while queue:
        u = queue.popleft()
        for v in out[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = (u, None)
                queue.append(v)
    return parent
