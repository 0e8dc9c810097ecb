"""The associated digraph D: stable matchings as cuts of a ring of node sets.

Each girl contributes a path from ``s*`` to ``t*`` whose arcs are her stable
edges in her order, best first.  A stable matching M corresponds to the set
L(M) of nodes in front of its arcs, and M is read back as the set of stable
arcs leaving that set.  Dummy arcs encode which node sets are allowed; the
ring keeps an equivalent, smaller generating set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .core import CoreSystem, is_stable
from .errors import ContractError, InputError
from .ringset import RingCode

SOURCE = "s*"
SINK = "t*"


def inner_node(girl: str, rank: int) -> str:
    """Name of the node after the ``rank``-th stable arc on a girl's path."""
    return f"{girl}:{rank}"


@dataclass(frozen=True, eq=False)
class AssocDigraph:
    nodes: tuple
    stable_arcs: dict  # edge id -> (tail, head)
    girl_paths: dict  # girl -> tuple of edge ids, best first
    witness: dict = field(repr=False)  # edge id -> girl-best stable matching through it
    ring: RingCode = field(repr=False)
    source: str = SOURCE
    sink: str = SINK

    @cached_property
    def prefix(self) -> dict:
        """Edge id -> nodes of its girl-path from s* up to and including its tail."""
        out = {}
        for w, path in self.girl_paths.items():
            seen = []
            for eid in path:
                seen.append(self.stable_arcs[eid][0])
                out[eid] = frozenset(seen)
        return out

    @cached_property
    def dummy_arcs(self) -> frozenset:
        """Arcs from the tail of each stable arc e to every other node in front
        of the arcs of its witness matching."""
        out = set()
        for eid, (t, _) in self.stable_arcs.items():
            for f in self.witness[eid]:
                out.update((t, v) for v in self.prefix[f] if v != t)
        return frozenset(out)

    def to_text(self) -> str:
        """Plain listing of nodes and arcs, for debugging."""
        lines = [f"node {v}" for v in self.nodes]
        for w, path in self.girl_paths.items():
            for eid in path:
                t, h = self.stable_arcs[eid]
                lines.append(f"arc {t} {h} stable {eid}")
        for t, h in sorted(self.dummy_arcs):
            lines.append(f"arc {t} {h} dummy")
        return "\n".join(lines) + "\n"


def build(core: CoreSystem) -> AssocDigraph:
    paths = core.girl_paths
    nodes = [SOURCE]
    arcs = {}
    index, girl_of, previous = {}, {}, {}
    for w in sorted(paths):
        path = paths[w]
        names = [SOURCE] + [inner_node(w, k) for k in range(1, len(path))] + [SINK]
        nodes += names[1:-1]
        for k, eid in enumerate(path):
            arcs[eid] = (names[k], names[k + 1])
            index[eid], girl_of[eid] = k, w
            if k:
                previous[eid] = path[k - 1]
    nodes.append(SINK)

    # The smallest member containing the tail of e is the set of nodes in
    # front of the witness M_e, so it is fixed by one position per girl.
    reach = {e: {girl_of[f]: index[f] for f in core.m_e[e]} for e in arcs}
    size = {e: sum(v.values()) for e, v in reach.items()}
    generators = set()
    # Tails of edges sharing a witness have equal closures: one cycle each.
    groups: dict = {}
    for eid in sorted(arcs):
        if arcs[eid][0] != SOURCE:
            groups.setdefault(core.m_e[eid], []).append(arcs[eid][0])
    for tails in groups.values():
        generators.update(zip(tails, tails[1:] + tails[:1]))
    for eid in sorted(arcs):
        t = arcs[eid][0]
        if t == SOURCE:
            continue
        targets = [f for f in core.m_e[eid] if index[f] > 0 and size[f] < size[eid]]
        targets.append(previous[eid])
        targets.sort(key=lambda f: (-size[f], f))
        covered: dict = {}
        for f in targets:
            if size[f] == size[eid] or covered.get(girl_of[f], -1) >= index[f]:
                continue  # same closure (handled by the cycle) or already covered
            generators.add((t, arcs[f][0]))
            for w, k in reach[f].items():
                if k > covered.get(w, -1):
                    covered[w] = k
    ring = RingCode(nodes, SOURCE, SINK, generators)
    return AssocDigraph(tuple(nodes), arcs, {w: paths[w] for w in sorted(paths)}, dict(core.m_e), ring)


def shore_of(core: CoreSystem, d: AssocDigraph, m: Iterable[str]) -> frozenset:
    """L(M): the nodes in front of the arcs of M on their girl-paths."""
    m = frozenset(m)
    if not is_stable(core.system, m):
        raise ContractError(f"not a stable matching: {sorted(m)}")
    out = set()
    for eid in m:
        out |= d.prefix[eid]
    return frozenset(out)


def matching_of(core: CoreSystem, d: AssocDigraph, z: Iterable[str]) -> frozenset:
    """Stable arcs leaving a nontrivial member z of the ring."""
    z = frozenset(z)
    if not z or z == frozenset(d.nodes) or not d.ring.is_member(z):
        raise InputError("node set is not a nontrivial member of the ring")
    return frozenset(e for e, (t, h) in d.stable_arcs.items() if t in z and h not in z)


def girl_better(d: AssocDigraph, shore_n: frozenset, shore_m: frozenset) -> bool:
    """N is girl-better than or equal to M exactly when L(N) is inside L(M)."""
    return shore_n <= shore_m
