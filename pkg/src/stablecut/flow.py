"""Exact integer network-flow kernel.

Capacities are non-negative ints or ``INF`` (``math.inf``); costs are ints.
Every routine works on a private residual copy, so networks stay immutable.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InfeasibleError, InputError, UnboundedFlowError

INF = math.inf


@dataclass(frozen=True)
class Arc:
    id: Hashable
    tail: Hashable
    head: Hashable
    capacity: int | float = INF
    cost: int = 0


@dataclass(frozen=True)
class FlowNetwork:
    nodes: tuple
    arcs: tuple
    source: Hashable
    sink: Hashable

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("duplicate node in network")
        known = set(self.nodes)
        if self.source not in known or self.sink not in known:
            raise InputError("source or sink is not a node")
        seen = set()
        for a in self.arcs:
            if a.id in seen:
                raise InputError(f"duplicate arc id {a.id!r}")
            seen.add(a.id)
            if a.tail not in known or a.head not in known:
                raise InputError(f"arc {a.id!r} has an unknown endpoint")
            if a.capacity != INF and (not isinstance(a.capacity, int) or a.capacity < 0):
                raise InputError(f"arc {a.id!r}: capacity must be a non-negative int or INF")

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def arc_by_id(self) -> dict:
        return {a.id: a for a in self.arcs}


@dataclass(frozen=True)
class Flow:
    values: Mapping[Hashable, int]
    amount: int

    def __getitem__(self, arc_id):
        return self.values.get(arc_id, 0)

    def surplus(self, net: FlowNetwork) -> int:
        """Total overload sum of (z(a) - g(a))^+ over arcs."""
        total = 0
        for a in net.arcs:
            z = self[a.id]
            if a.capacity != INF and z > a.capacity:
                total += z - a.capacity
        return total

    def imbalance(self, net: FlowNetwork) -> dict:
        """Out-flow minus in-flow at every node."""
        bal = {v: 0 for v in net.nodes}
        for a in net.arcs:
            z = self[a.id]
            bal[a.tail] += z
            bal[a.head] -= z
        return bal

    def is_conserving(self, net: FlowNetwork) -> bool:
        bal = self.imbalance(net)
        return all(b == 0 for v, b in bal.items() if v not in (net.source, net.sink))


@dataclass(frozen=True)
class Potential:
    values: Mapping[Hashable, int]

    def __getitem__(self, v):
        return self.values[v]

    def drop(self, arc: Arc) -> int:
        """pi(head) - pi(tail)."""
        return self.values[arc.head] - self.values[arc.tail]


class _Residual:
    """Paired forward/backward residual arcs; arc ``i ^ 1`` is the partner of ``i``."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[int] = []
        self.cap: list = []
        self.cost: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, cap, cost: int = 0) -> int:
        i = len(self.head)
        self.head += (v, u)
        self.cap += (cap, 0)
        self.cost += (cost, -cost)
        self.adj[u].append(i)
        self.adj[v].append(i + 1)
        return i

    def tail(self, i: int) -> int:
        return self.head[i ^ 1]

    @classmethod
    def of(cls, net: FlowNetwork, with_costs: bool = True):
        res = cls(len(net.nodes))
        idx = net.index
        handles = []
        for a in net.arcs:
            handles.append(res.add(idx[a.tail], idx[a.head], a.capacity, a.cost if with_costs else 0))
        return res, handles

    def reachable(self, s: int, ok=None) -> list[bool]:
        seen = [False] * self.n
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for i in self.adj[u]:
                v = self.head[i]
                if not seen[v] and self.cap[i] > 0 and (ok is None or ok(i)):
                    seen[v] = True
                    queue.append(v)
        return seen

    def max_flow(self, s: int, t: int, ok=None) -> int:
        """Dinic's blocking-flow scheme restricted to arcs accepted by ``ok``."""
        total = 0
        head, cap, adj = self.head, self.cap, self.adj
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for i in adj[u]:
                    v = head[i]
                    if level[v] < 0 and cap[i] > 0 and (ok is None or ok(i)):
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return total
            pointer = [0] * self.n
            while True:
                pushed = self._augment(s, t, level, pointer, ok)
                if pushed == 0:
                    break
                total += pushed

    def _augment(self, s, t, level, pointer, ok):
        head, cap, adj = self.head, self.cap, self.adj
        path: list[int] = []
        u = s
        while True:
            if u == t:
                amount = min(cap[i] for i in path)
                if amount == INF:
                    raise UnboundedFlowError("augmenting path of infinite capacity")
                for i in path:
                    cap[i] -= amount
                    cap[i ^ 1] += amount
                return amount
            arcs = adj[u]
            while pointer[u] < len(arcs):
                i = arcs[pointer[u]]
                v = head[i]
                if cap[i] > 0 and level[v] == level[u] + 1 and (ok is None or ok(i)):
                    break
                pointer[u] += 1
            else:
                if u == s:
                    return 0
                level[u] = -1
                i = path.pop()
                u = head[i ^ 1]
                pointer[u] += 1
                continue
            path.append(arcs[pointer[u]])
            u = head[arcs[pointer[u]]]

    def flow_on(self, handle: int) -> int:
        return self.cap[handle ^ 1]


def _read_flow(net: FlowNetwork, res: _Residual, handles: Sequence[int]) -> Flow:
    values = {a.id: res.flow_on(h) for a, h in zip(net.arcs, handles)}
    amount = sum(values[a.id] for a in net.arcs if a.tail == net.source) - sum(
        values[a.id] for a in net.arcs if a.head == net.source
    )
    return Flow(values, amount)


def shortest_path_dijkstra(net: FlowNetwork):
    """Distances from the source using arc costs (must be >= 0).

    Returns ``(dist, parent)`` where ``dist`` maps every node to its distance
    (``INF`` when unreachable) and ``parent`` maps reached nodes other than the
    source to the id of their tree arc.  Ties go to the node listed first.
    """
    idx = net.index
    out: list[list[Arc]] = [[] for _ in net.nodes]
    for a in net.arcs:
        if a.cost < 0:
            raise InputError(f"arc {a.id!r} has negative cost")
        out[idx[a.tail]].append(a)
    dist = [INF] * len(net.nodes)
    parent: list = [None] * len(net.nodes)
    s = idx[net.source]
    dist[s] = 0
    heap = [(0, s)]
    done = [False] * len(net.nodes)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for a in out[u]:
            v = idx[a.head]
            nd = d + a.cost
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = a.id
                heapq.heappush(heap, (nd, v))
    labels = {v: dist[i] for i, v in enumerate(net.nodes)}
    tree = {v: parent[i] for i, v in enumerate(net.nodes) if parent[i] is not None}
    return labels, tree


def max_flow_min_cut(net: FlowNetwork):
    """Maximum flow and the smallest minimum-cut out-shore.

    Raises ``UnboundedFlowError`` if some source-sink path has infinite capacity.
    """
    res, handles = _Residual.of(net, with_costs=False)
    s, t = net.index[net.source], net.index[net.sink]
    if s == t:
        raise InputError("source equals sink")
    res.max_flow(s, t)
    seen = res.reachable(s)
    shore = frozenset(v for i, v in enumerate(net.nodes) if seen[i])
    return _read_flow(net, res, handles), shore


def min_cost_flow_unit_costs(net: FlowNetwork, ell: int, final_phase: bool = True):
    """Primal-dual min-cost flow for arc costs in {0, 1}.

    Starting from zero flow and zero potential, alternate a maximum flow on the
    tight residual arcs with raising the potential by one on every node not
    reachable from the source, until the sink potential reaches ``ell``.  With
    ``final_phase`` a last maximum flow is run at that potential.  The result
    satisfies: cost > drop implies zero flow, cost < drop implies saturation.

    Raises ``InfeasibleError`` when an infinite-capacity tight path appears
    before the sink potential reaches ``ell``.
    """
    if not isinstance(ell, int) or ell < 1:
        raise InputError("target potential must be a positive integer")
    for a in net.arcs:
        if a.cost not in (0, 1):
            raise InputError(f"arc {a.id!r}: cost must be 0 or 1")
    res, handles = _Residual.of(net)
    s, t = net.index[net.source], net.index[net.sink]
    pi = [0] * res.n
    head, cost = res.head, res.cost

    def tight(i):
        return cost[i] == pi[head[i]] - pi[head[i ^ 1]]

    while True:
        try:
            res.max_flow(s, t, tight)
        except UnboundedFlowError as exc:
            if pi[t] < ell:
                raise InfeasibleError(
                    f"sink potential cannot reach {ell}: a path has only {pi[t]} cost-1 arcs"
                ) from exc
            raise
        if pi[t] == ell:
            break
        seen = res.reachable(s, tight)
        for v in range(res.n):
            if not seen[v]:
                pi[v] += 1
        if pi[t] == ell and not final_phase:
            break
    potential = Potential({v: pi[i] for i, v in enumerate(net.nodes)})
    return _read_flow(net, res, handles), potential


def min_cost_flow(net: FlowNetwork):
    """Minimum-cost flow of any amount (successive shortest paths).

    Arc costs may be negative as long as the network has no negative cycle.
    Augments along cheapest source-sink paths while they have negative cost.
    Returns the flow and integer node labels ``p`` with
    ``p[head] - p[tail] <= cost`` on every residual arc (including a free
    return arc from sink to source), shifted so that ``p[source] == 0``.
    """
    res, handles = _Residual.of(net)
    s, t = net.index[net.source], net.index[net.sink]
    while True:
        dist, parent = _bellman_ford(res, [s])
        if dist[t] == INF or dist[t] >= 0:
            break
        path = []
        v = t
        while v != s:
            i = parent[v]
            path.append(i)
            v = res.head[i ^ 1]
        amount = min(res.cap[i] for i in path)
        if amount == INF:
            raise UnboundedFlowError("negative-cost path of infinite capacity")
        for i in path:
            res.cap[i] -= amount
            res.cap[i ^ 1] += amount
    flow = _read_flow(net, res, handles)
    # close the flow into a circulation so the labels also satisfy p[s] <= p[t]
    back = res.add(t, s, INF, 0)
    res.cap[back ^ 1] = flow.amount
    labels, _ = _bellman_ford(res, range(res.n))
    base = labels[s]
    potential = {v: labels[i] - base for i, v in enumerate(net.nodes)}
    return flow, potential


def _bellman_ford(res: _Residual, roots: Iterable[int]):
    dist = [INF] * res.n
    parent = [None] * res.n
    queue = deque()
    queued = [False] * res.n
    for r in roots:
        dist[r] = 0
        queue.append(r)
        queued[r] = True
    rounds = 0
    limit = res.n * max(1, len(res.head))
    while queue:
        u = queue.popleft()
        queued[u] = False
        rounds += 1
        if rounds > limit:
            raise InputError("negative cycle in residual network")
        for i in res.adj[u]:
            if res.cap[i] <= 0:
                continue
            v = res.head[i]
            nd = dist[u] + res.cost[i]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = i
                if not queued[v]:
                    queued[v] = True
                    queue.append(v)
    return dist, parent


def b_matching_max(edges: Sequence[tuple], b_left: Mapping, b_right: Mapping):
    """Maximum b-matching of a bipartite graph and a minimum b-cover.

    ``edges`` holds ``(edge_id, left, right)`` triples.  Returns ``(z, cover)``
    where ``z`` maps edge ids to values and ``cover`` is a pair
    ``(left_nodes, right_nodes)`` meeting every edge with
    ``b(cover) == sum(z)``.  The support of ``z`` is a forest.
    """
    left = sorted(b_left, key=repr)
    right = sorted(b_right, key=repr)
    nodes = ["s", "t"] + [("L", u) for u in left] + [("R", v) for v in right]
    arcs = [Arc(("s", u), "s", ("L", u), b_left[u]) for u in left]
    arcs += [Arc(("t", v), ("R", v), "t", b_right[v]) for v in right]
    for eid, u, v in edges:
        if u not in b_left or v not in b_right:
            raise InputError(f"edge {eid!r} has an unknown endpoint")
        arcs.append(Arc(("e", eid), ("L", u), ("R", v), INF))
    flow, shore = max_flow_min_cut(FlowNetwork(nodes, arcs, "s", "t"))
    z = {eid: flow[("e", eid)] for eid, _, _ in edges}
    _cancel_cycles(edges, z)
    cover_left = frozenset(u for u in left if ("L", u) not in shore)
    cover_right = frozenset(v for v in right if ("R", v) in shore)
    return z, (cover_left, cover_right)


def _cancel_cycles(edges, z):
    """Shift value around cycles of the support until it is a forest.

    Node degrees and the total value are preserved.
    """
    ends = {eid: (("L", u), ("R", v)) for eid, u, v in edges}
    while True:
        support = [eid for eid, _, _ in edges if z[eid] > 0]
        cycle = _find_cycle(support, ends)
        if cycle is None:
            return
        odd = cycle[0::2]
        even = cycle[1::2]
        delta = min(z[e] for e in odd)
        for e in odd:
            z[e] -= delta
        for e in even:
            z[e] += delta


def _find_cycle(support, ends):
    adj: dict = {}
    for eid in support:
        a, b = ends[eid]
        adj.setdefault(a, []).append((b, eid))
        adj.setdefault(b, []).append((a, eid))
    visited = set()
    for root in adj:
        if root in visited:
            continue
        parent = {root: (None, None)}
        depth = {root: 0}
        stack = [root]
        visited.add(root)
        while stack:
            u = stack.pop()
            for v, eid in adj[u]:
                if eid == parent[u][1]:
                    continue
                if v in depth:
                    # tree paths from u and v up to their meeting point, plus eid
                    left, right = [], []
                    a, b = u, v
                    while a != b:
                        if depth[a] >= depth[b]:
                            left.append(parent[a][1])
                            a = parent[a][0]
                        else:
                            right.append(parent[b][1])
                            b = parent[b][0]
                    return [eid] + left + right[::-1]
                parent[v] = (u, eid)
                depth[v] = depth[u] + 1
                visited.add(v)
                stack.append(v)
    return None


def decompose_into_path_flows(net: FlowNetwork, flow: Flow):
    """Split a conserving flow into source-sink paths with multiplicities.

    Paths are tuples of arc ids.  Raises ``InputError`` if the flow does not
    conserve or contains a circulation.
    """
    if not flow.is_conserving(net):
        raise InputError("flow does not conserve at inner nodes")
    rest = {a.id: flow[a.id] for a in net.arcs}
    for a in net.arcs:
        if rest[a.id] < 0:
            raise InputError("negative flow value")
    out: dict = {v: [] for v in net.nodes}
    for a in net.arcs:
        out[a.tail].append(a)
    paths = []
    while True:
        pred = {net.source: None}
        queue = deque([net.source])
        while queue and net.sink not in pred:
            u = queue.popleft()
            for a in out[u]:
                if rest[a.id] > 0 and a.head not in pred:
                    pred[a.head] = a
                    queue.append(a.head)
        if net.sink not in pred:
            break
        path = []
        v = net.sink
        while v != net.source:
            a = pred[v]
            path.append(a)
            v = a.tail
        path.reverse()
        amount = min(rest[a.id] for a in path)
        for a in path:
            rest[a.id] -= amount
        paths.append((tuple(a.id for a in path), amount))
    if any(rest.values()):
        raise InputError("flow contains a circulation")
    return paths
