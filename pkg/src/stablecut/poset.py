"""Finite posets, the induced poset of stable edges, and chain/antichain duality.

Elements are hashable; ``above`` pairs ``(a, b)`` mean a is greater than b.
For the poset of stable edges, e is above f when f is strictly girl-better
than the edge that the girl-best stable matching through e gives to f's girl.
Its maximal antichains are exactly the stable matchings.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .core import CoreSystem
from .errors import ContractError, InfeasibleError, InputError, ResourceError
from .flow import INF, Arc, Flow, FlowNetwork, b_matching_max, decompose_into_path_flows, min_cost_flow
from .lcut import LCutCertificate, min_lcut_ring_compatible
from .ringset import RingCode, pack_members


class Poset:
    def __init__(self, elements: Iterable[Hashable], above: Iterable[tuple] = ()):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise InputError("duplicate poset element")
        known = set(self.elements)
        below = {x: set() for x in self.elements}
        for a, b in above:
            if a not in known or b not in known:
                raise InputError(f"relation ({a!r}, {b!r}) uses an unknown element")
            below[a].add(b)
        # transitive closure by depth-first search from every element
        closed = {}
        for x in self.elements:
            seen = set()
            stack = list(below[x])
            while stack:
                y = stack.pop()
                if y not in seen:
                    seen.add(y)
                    stack.extend(below[y])
            if x in seen:
                raise InputError(f"relation has a cycle through {x!r}")
            closed[x] = frozenset(seen)
        self.below = closed
        self.above = {x: frozenset(y for y in self.elements if x in closed[y]) for x in self.elements}
        self.position = {x: i for i, x in enumerate(self.elements)}

    def greater(self, a, b) -> bool:
        return b in self.below[a]

    def comparable(self, a, b) -> bool:
        return a == b or b in self.below[a] or a in self.below[b]

    def is_antichain(self, xs: Iterable) -> bool:
        xs = list(xs)
        return len(set(xs)) == len(xs) and not any(
            self.greater(a, b) or self.greater(b, a) for a, b in itertools.combinations(xs, 2)
        )

    def is_chain(self, xs: Iterable) -> bool:
        xs = list(xs)
        return len(set(xs)) == len(xs) and all(
            self.comparable(a, b) for a, b in itertools.combinations(xs, 2)
        )

    def sorted_chain(self, xs: Iterable) -> tuple:
        """Elements of a chain from largest to smallest."""
        return tuple(sorted(xs, key=lambda x: -len(self.below[x])))

    def relation(self) -> frozenset:
        return frozenset((a, b) for a in self.elements for b in self.below[a])

    @cached_property
    def chain_digraph(self) -> "ChainDigraph":
        return build_chain_digraph(self)

    @cached_property
    def width(self) -> int:
        return len(self.chain_digraph.chains)

    @cached_property
    def d_extendible(self) -> bool:
        """Every maximal antichain is maximum; tested on singletons and pairs."""
        for x in self.elements:
            if d_extend(self, [x]) is None:
                return False
        for a, b in itertools.combinations(self.elements, 2):
            if not self.comparable(a, b) and d_extend(self, [a, b]) is None:
                return False
        return True


class InducedPoset(Poset):
    """Order on the stable edges of a core."""

    def __init__(self, core: CoreSystem):
        d = core.digraph
        above = []
        for e in sorted(core.stable_edges):
            lower = set()
            for f in core.m_e[e]:
                lower |= d.prefix[f]
            for f in sorted(core.stable_edges):
                if f != e and d.stable_arcs[f][1] in lower:
                    above.append((e, f))
        super().__init__(sorted(core.stable_edges), above)
        self.core = core


def induced_poset(core: CoreSystem) -> InducedPoset:
    return InducedPoset(core)


def _demands(poset: Poset, f: Mapping | None, default: int = 0) -> dict:
    f = {} if f is None else f
    unknown = set(f) - set(poset.elements)
    if unknown:
        raise InputError(f"values for unknown elements: {sorted(map(repr, unknown))}")
    out = {}
    for x in poset.elements:
        v = f.get(x, default)
        if not isinstance(v, int) or v < 0:
            raise InputError(f"value of {x!r} must be a non-negative int")
        out[x] = v
    return out


# ---------------------------------------------------------------- Mirsky

@dataclass(frozen=True)
class AntichainCover:
    family: tuple  # ((antichain, multiplicity), ...)
    chain: tuple
    value: int


def mirsky_cover(poset: Poset, f: Mapping | None) -> AntichainCover:
    """Fewest antichains (with multiplicity) covering each x at least f(x)
    times, and a chain of equal f-weight."""
    rest = _demands(poset, f)
    layers = []
    while any(rest.values()):
        positive = [x for x in poset.elements if rest[x] > 0]
        bottom = [x for x in positive if not any(rest[y] > 0 for y in poset.below[x])]
        step = min(rest[x] for x in bottom)
        for x in bottom:
            rest[x] -= step
        layers.append((frozenset(bottom), step))
    chain = []
    if layers:
        k = len(layers) - 1
        current = min(layers[k][0], key=poset.position.get)
        chain.append(current)
        while True:
            while k >= 0 and current in layers[k][0]:
                k -= 1
            if k < 0:
                break
            current = min((y for y in layers[k][0] if poset.greater(current, y)), key=poset.position.get)
            chain.append(current)
    family = [(d_extend(poset, a) or a, k) for a, k in layers]
    value = sum(k for _, k in layers)
    return AntichainCover(tuple(family), tuple(chain), value)


# ---------------------------------------------------------------- Dilworth

@dataclass(frozen=True)
class ChainCoverCertificate:
    antichain: frozenset
    weight: int
    chains: tuple  # ((chain from largest to smallest, multiplicity), ...)


def dilworth_weighted(poset: Poset, w: Mapping | None, extend: bool = True) -> ChainCoverCertificate:
    """Maximum-weight antichain and a chain family of equal size covering each
    element x at least w(x) times.

    With ``extend`` the antichain is grown by zero-weight elements into a
    maximum antichain whenever one contains it.
    """
    w = _demands(poset, w)
    live = [x for x in poset.elements if w[x] > 0]
    edges = [((u, v), u, v) for u in live for v in live if poset.greater(u, v)]
    z0, (cover_left, cover_right) = b_matching_max(edges, {x: w[x] for x in live}, {x: w[x] for x in live})
    antichain = frozenset(x for x in live if x not in cover_left and x not in cover_right)
    into = {x: 0 for x in live}
    out = {x: 0 for x in live}
    for (u, v), val in z0.items():
        out[u] += val
        into[v] += val
    nodes = ["source", "sink"] + [("x", x) for x in live]
    arcs, values = [], {}
    for x in live:
        arcs.append(Arc(("s", x), "source", ("x", x)))
        values[("s", x)] = w[x] - into[x]
        arcs.append(Arc(("t", x), ("x", x), "sink"))
        values[("t", x)] = w[x] - out[x]
    for (u, v), val in z0.items():
        if val:
            arcs.append(Arc(("m", u, v), ("x", u), ("x", v)))
            values[("m", u, v)] = val
    net = FlowNetwork(nodes, arcs, "source", "sink")
    amount = sum(values[("s", x)] for x in live)
    chains = []
    for path, k in decompose_into_path_flows(net, Flow(values, amount)):
        chain = tuple(net.arc_by_id[a].head[1] for a in path[:-1])
        chains.append((chain, k))
    if extend and antichain:
        antichain = d_extend(poset, antichain) or antichain
    weight = sum(w[x] for x in antichain)
    return ChainCoverCertificate(antichain, weight, tuple(chains))


def includes_stable_matching(core: CoreSystem, edges: Iterable[str], poset: InducedPoset | None = None):
    """Whether some stable matching lies inside ``edges``.

    Returns ``(True, matching)`` or ``(False, chains)`` where fewer than n
    chains cover the stable edges in ``edges``.
    """
    poset = poset or induced_poset(core)
    edges = frozenset(edges)
    unknown = edges - set(core.system.edge)
    if unknown:
        raise InputError(f"unknown edge ids: {sorted(unknown)}")
    cert = dilworth_weighted(poset, {e: 1 for e in edges if e in core.stable_edges})
    if cert.weight == core.n and cert.antichain <= edges:
        return True, cert.antichain
    return False, cert.chains


# ---------------------------------------------------------------- Greene-Kleitman

@dataclass(frozen=True)
class GKCertificate:
    antichains: tuple
    chains: tuple
    value: int

    def violations(self, poset: Poset, ell: int) -> list:
        problems = []
        union_a = frozenset().union(*self.antichains) if self.antichains else frozenset()
        union_c = frozenset().union(*self.chains) if self.chains else frozenset()
        if len(self.antichains) != ell:
            problems.append("wrong number of antichains")
        for a in self.antichains:
            if not poset.is_antichain(a):
                problems.append("an antichain is not an antichain")
        for c in self.chains:
            if not poset.is_chain(c):
                problems.append("a chain is not a chain")
        if union_a | union_c != frozenset(poset.elements):
            problems.append("antichains and chains do not cover the poset")
        for a in self.antichains:
            for c in self.chains:
                if len(a & frozenset(c)) != 1:
                    problems.append("an antichain misses or repeats on a chain")
        if sum(len(c) for c in self.chains) != len(union_c):
            problems.append("chains overlap")
        if sum(len(a) for a in self.antichains) != len(union_a):
            problems.append("antichains overlap")
        chain_side = ell * len(self.chains) + len(frozenset(poset.elements) - union_c)
        if not (len(union_a) == chain_side == self.value):
            problems.append(f"values differ: {len(union_a)}, {chain_side}, {self.value}")
        return problems


def greene_kleitman(poset: Poset, ell: int) -> GKCertificate:
    """Largest union of ``ell`` disjoint antichains with an orthogonal chain
    family attaining ell*|C| + |S - union(C)|."""
    if not isinstance(ell, int) or ell < 1:
        raise InputError("ell must be a positive integer")
    nodes = ["s", "t"]
    arcs = []
    for x in poset.elements:
        nodes += [("in", x), ("out", x)]
        arcs.append(Arc(("s", x), "s", ("in", x), INF, ell))
        arcs.append(Arc(("e", x), ("in", x), ("out", x), 1, -1))
        arcs.append(Arc(("t", x), ("out", x), "t", INF, 0))
    for x in poset.elements:
        for y in poset.elements:
            if poset.greater(x, y):
                arcs.append(Arc(("c", x, y), ("out", x), ("in", y), INF, 0))
    net = FlowNetwork(nodes, arcs, "s", "t")
    flow, label = min_cost_flow(net)
    chains = []
    for path, k in decompose_into_path_flows(net, flow):
        chain = tuple(net.arc_by_id[a].id[1] for a in path if a[0] == "e")
        chains.extend([chain] * k)
    antichains = [set() for _ in range(ell)]
    for x in poset.elements:
        low, high = label[("out", x)], label[("in", x)]
        if low < high:
            if not 0 <= low < ell:
                raise AssertionError("potential out of range")
            antichains[low].add(x)
    antichains = tuple(frozenset(a) for a in antichains)
    value = sum(len(a) for a in antichains)
    return GKCertificate(antichains, tuple(chains), value)


@dataclass(frozen=True)
class WeightedGK:
    antichains: tuple
    chains: tuple
    value: int
    slack: Mapping  # element -> w(x) minus the number of chains through x


def weighted_greene_kleitman(poset: Poset, w: Mapping | None, ell: int, max_total: int = 2000) -> WeightedGK:
    """Max w-weight union of ell antichains by replacing x with w(x)
    incomparable copies."""
    w = _demands(poset, w)
    total = sum(w.values())
    if total > max_total:
        raise ResourceError(f"total weight {total} exceeds the bound {max_total}")
    copies = [(x, k) for x in poset.elements for k in range(w[x])]
    above = [((x, i), (y, j)) for x, i in copies for y, j in copies if poset.greater(x, y)]
    gk = greene_kleitman(Poset(copies, above), ell)
    seen = set()
    antichains = []
    for a in gk.antichains:
        proj = frozenset(x for x, _ in a) - seen
        seen |= proj
        antichains.append(proj)
    chains = tuple(tuple(x for x, _ in c) for c in gk.chains)
    value = sum(w[x] for x in seen)
    if value != gk.value:
        raise AssertionError("projection changed the union weight")
    slack = {x: w[x] - sum(1 for c in chains if x in c) for x in poset.elements}
    return WeightedGK(tuple(antichains), chains, value, slack)


# ---------------------------------------------------------------- D-antichains

@dataclass(frozen=True, eq=False)
class ChainDigraph:
    """One source-sink path per chain of a minimum chain partition; each
    element is an arc, larger elements first.  Ring members correspond to
    maximum antichains through the arcs leaving them."""

    nodes: tuple
    element_arcs: dict
    chains: tuple
    ring: RingCode
    source: str = "s"
    sink: str = "t"

    def antichain_of(self, z) -> frozenset:
        return frozenset(x for x, (t, h) in self.element_arcs.items() if t in z and h not in z)


def build_chain_digraph(poset: Poset) -> ChainDigraph:
    cover = dilworth_weighted(poset, {x: 1 for x in poset.elements}, extend=False)
    chains = [c for c, k in cover.chains for _ in range(k)]
    if sorted(map(poset.position.get, itertools.chain.from_iterable(chains))) != list(range(len(poset.elements))):
        raise AssertionError("unit chain cover is not a partition")
    nodes = ["s"]
    arcs = {}
    for i, chain in enumerate(chains):
        names = ["s"] + [("n", i, j) for j in range(1, len(chain))] + ["t"]
        nodes += names[1:-1]
        for j, x in enumerate(chain):
            arcs[x] = (names[j], names[j + 1])
    nodes.append("t")
    generators = set()
    for chain in chains:
        for a, b in zip(chain, chain[1:]):
            generators.add((arcs[b][0], arcs[a][0]))
    for i, chain in enumerate(chains):
        for x in chain:
            for k, other in enumerate(chains):
                if k == i:
                    continue
                bigger = [z for z in other if poset.greater(z, x)]
                if bigger:
                    generators.add((arcs[x][0], arcs[bigger[-1]][1]))
    ring = RingCode(nodes, "s", "t", generators)
    return ChainDigraph(tuple(nodes), arcs, tuple(chains), ring)


def d_extend(poset: Poset, antichain: Iterable) -> frozenset | None:
    """Smallest-shore maximum antichain containing ``antichain``, or None."""
    antichain = frozenset(antichain)
    if not poset.is_antichain(antichain):
        raise InputError("not an antichain")
    cd = poset.chain_digraph
    if not cd.chains:
        return frozenset()
    z = cd.ring.smallest_member_containing({"s"} | {cd.element_arcs[x][0] for x in antichain})
    if z is None or any(cd.element_arcs[x][1] in z for x in antichain):
        return None
    return cd.antichain_of(z)


def pack_d_antichains(poset: Poset, h: Mapping | None = None):
    """Max h-independent family of maximum antichains versus min h-blocker."""
    from .optimize import PackingCertificate

    if not poset.d_extendible:
        raise ContractError("poset is not D-antichain-extendible")
    cd = poset.chain_digraph
    if not cd.chains:
        raise ContractError("empty poset: every family is unbounded")
    bounds = _demands(poset, h, default=1)
    chain, blocker, value = pack_members(cd.element_arcs, bounds, cd.ring)
    family = tuple((cd.antichain_of(z), k) for z, k in chain)
    return PackingCertificate(family, frozenset(blocker), value)


@dataclass(frozen=True)
class DAntichainFamily:
    antichains: tuple
    cost: int
    certificate: LCutCertificate | None
    lower_bound: int


def _cheapest_single(poset: Poset, ell: int, c: Mapping):
    cd = poset.chain_digraph
    low = min(c.values(), default=0)
    arcs = tuple(Arc(x, *cd.element_arcs[x], c[x] - low) for x in poset.elements)
    net = FlowNetwork(cd.nodes, arcs, cd.source, cd.sink)
    cert = min_lcut_ring_compatible(net, cd.ring, ell)
    antichains = tuple(cd.antichain_of(z) for z in cert.lcut.shores)
    return antichains, cert


def _costs(poset, c):
    c = {} if c is None else c
    out = {}
    for x in poset.elements:
        v = c.get(x, 0)
        if not isinstance(v, int):
            raise InputError(f"cost of {x!r} must be an integer")
        out[x] = v
    return out


def cheapest_disjoint_d_antichains(poset: Poset, ell: int, costs, max_members: int = 20000) -> DAntichainFamily:
    """``ell`` disjoint maximum antichains of minimum cost.

    ``costs`` is one cost map (minimize the union cost) or a sequence of
    ``ell`` maps (minimize the sum of c_i(A_i)).
    """
    if not poset.d_extendible:
        raise ContractError("poset is not D-antichain-extendible")
    packing = pack_d_antichains(poset)
    if packing.value < ell:
        raise InfeasibleError(f"only {packing.value} disjoint maximum antichains exist", certificate=packing)
    if isinstance(costs, Mapping) or costs is None:
        c = _costs(poset, costs)
        antichains, cert = _cheapest_single(poset, ell, c)
        total = sum(c[x] for a in antichains for x in a)
        return DAntichainFamily(antichains, total, cert, total)
    costs = [_costs(poset, c) for c in costs]
    if len(costs) != ell:
        raise InputError(f"need exactly {ell} cost maps")
    # Stacked copies: copy i lies entirely below copy j for i < j.  Its
    # cheapest l disjoint maximum antichains bound the answer from below.
    stacked = [(x, i) for i in range(ell) for x in poset.elements]
    above = [((x, i), (y, j)) for x, i in stacked for y, j in stacked if i > j or (i == j and poset.greater(x, y))]
    product = Poset(stacked, above)
    star = {(x, i): costs[i][x] for x, i in stacked}
    found, cert = _cheapest_single(product, ell, star)
    bound = sum(star[p] for a in found for p in a)
    layers = {}
    for a in found:
        (i,) = {i for _, i in a}
        layers.setdefault(i, []).append(frozenset(x for x, _ in a))
    if sorted(layers) == list(range(ell)) and all(len(v) == 1 for v in layers.values()):
        picked = [layers[i][0] for i in range(ell)]
        if all(not (a & b) for a, b in itertools.combinations(picked, 2)):
            return DAntichainFamily(tuple(picked), bound, cert, bound)
    picked, total = _exhaustive_assignment(poset, costs, max_members)
    return DAntichainFamily(picked, total, None, bound)


def _exhaustive_assignment(poset: Poset, costs: Sequence[Mapping], max_members: int):
    cd = poset.chain_digraph
    members = [cd.antichain_of(z) for z in cd.ring.members(limit=max_members)]
    ell = len(costs)
    priced = [sorted(((sum(c[x] for x in a), a) for a in members), key=lambda p: (p[0], sorted(map(repr, p[1])))) for c in costs]
    floor = [p[0][0] for p in priced]
    best = [None, None]

    def rec(i, used, chosen, total):
        if best[0] is not None and total + sum(floor[i:]) >= best[0]:
            return
        if i == ell:
            best[0], best[1] = total, tuple(chosen)
            return
        for value, a in priced[i]:
            if best[0] is not None and total + value + sum(floor[i + 1:]) >= best[0]:
                break
            if a & used:
                continue
            chosen.append(a)
            rec(i + 1, used | a, chosen, total + value)
            chosen.pop()

    rec(0, frozenset(), [], 0)
    if best[0] is None:
        raise InfeasibleError("no disjoint assignment exists")
    return best[1], best[0]
