"""Cheapest, multi-cost, constrained stable matchings and h-independent packing.

All routines work on the ring of node sets of the associated digraph: a
cheapest stable matching is a minimum cut whose shore is a ring member.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .assoc import AssocDigraph, matching_of
from .core import CoreSystem
from .errors import ContractError, InputError, UnboundedFlowError
from .flow import INF, Arc, FlowNetwork, _Residual
from .ringset import RingCode, pack_members, pack_members_unit


@dataclass(frozen=True)
class PackingCertificate:
    """Nested family with multiplicities versus a blocker of equal value."""

    family: tuple  # ((member, multiplicity), ...)
    blocker: frozenset
    value: int


def cost_vector(core: CoreSystem, c: Mapping | None) -> dict:
    """Integer cost on every stable edge; missing entries count as 0."""
    c = {} if c is None else c
    unknown = set(c) - set(core.system.edge)
    if unknown:
        raise InputError(f"cost for unknown edges: {sorted(unknown)}")
    out = {}
    for e in core.stable_edges:
        v = c.get(e, 0)
        if not isinstance(v, int) or isinstance(v, bool):
            raise InputError(f"cost of {e!r} must be an integer")
        out[e] = v
    return out


def _shifted(core, c):
    c = cost_vector(core, c)
    low = min(c.values(), default=0)
    return {e: v - low for e, v in c.items()}, low


def _network(d: AssocDigraph, capacity: Mapping, ring: RingCode) -> FlowNetwork:
    arcs = [Arc(("a", e), *d.stable_arcs[e], capacity[e]) for e in sorted(d.stable_arcs)]
    arcs += [Arc(("c", u, v), u, v) for u, v in ring.useful_arcs()]
    return FlowNetwork(d.nodes, arcs, d.source, d.sink)


def minimizer_ring(core: CoreSystem, d: AssocDigraph | None, g: Mapping, ring: RingCode | None = None):
    """Sub-ring of members with minimum cut value under capacities ``g``.

    ``g`` maps stable edges to non-negative ints (or INF).  Returns the new
    ring and the minimum value; an infinite minimum leaves the ring unchanged.
    """
    d = d or core.digraph
    ring = ring or d.ring
    for e in d.stable_arcs:
        if g[e] != INF and (not isinstance(g[e], int) or g[e] < 0):
            raise InputError(f"capacity of {e!r} must be a non-negative int or INF")
    net = _network(d, g, ring)
    res, handles = _Residual.of(net, with_costs=False)
    s, t = net.index[net.source], net.index[net.sink]
    try:
        value = res.max_flow(s, t)
    except UnboundedFlowError:
        return ring, INF
    residual = set()
    for i in range(len(res.head)):
        if res.cap[i] > 0:
            residual.add((net.nodes[res.tail(i)], net.nodes[res.head[i]]))
    return ring.restrict(residual), value


def _best_member(core, d, ring) -> frozenset:
    z = ring.smallest_member_containing([d.source])
    if z is None:
        raise ContractError("ring has no nontrivial member")
    return matching_of(core, d, z)


def cheapest_stable_matching(core: CoreSystem, c: Mapping, d: AssocDigraph | None = None):
    """Girl-best stable matching of minimum cost; returns ``(matching, cost)``."""
    d = d or core.digraph
    shifted, low = _shifted(core, c)
    ring, value = minimizer_ring(core, d, shifted)
    m = _best_member(core, d, ring)
    return m, value + low * core.n


def multi_cost_stable_matching(core: CoreSystem, costs: Sequence[Mapping], d: AssocDigraph | None = None):
    """Girl-best matching minimizing c_1, then c_2 among those, and so on."""
    d = d or core.digraph
    ring = d.ring
    for c in costs:
        shifted, _ = _shifted(core, c)
        ring, _ = minimizer_ring(core, d, shifted, ring)
    return _best_member(core, d, ring)


def constrained_stable_matching(
    core: CoreSystem,
    forced: Iterable[str] = (),
    forbidden: Iterable[str] = (),
    c: Mapping | None = None,
    d: AssocDigraph | None = None,
):
    """Girl-best (cheapest, if ``c`` given) stable matching with all forced
    edges and no forbidden edge, or None when none exists."""
    d = d or core.digraph
    forced, forbidden = frozenset(forced), frozenset(forbidden)
    unknown = (forced | forbidden) - set(core.system.edge)
    if unknown:
        raise InputError(f"unknown edge ids: {sorted(unknown)}")
    if forced & forbidden:
        raise InputError("an edge is both forced and forbidden")
    if not core.system.is_matching(forced):
        raise InputError("forced edges do not form a matching")
    if not forced <= core.stable_edges:
        return None
    n = core.n
    penalty = {e: 0 if e in forced else n + 1 if e in forbidden else 1 for e in core.stable_edges}
    ring, value = minimizer_ring(core, d, penalty)
    if value != n - len(forced):
        return None
    if c is not None:
        shifted, _ = _shifted(core, c)
        ring, _ = minimizer_ring(core, d, shifted, ring)
    return _best_member(core, d, ring)


def _bounds(core, h):
    if h is None:
        return {e: 1 for e in core.stable_edges}
    unknown = set(h) - set(core.system.edge)
    if unknown:
        raise InputError(f"bounds for unknown edges: {sorted(unknown)}")
    out = {}
    for e in core.stable_edges:
        v = h.get(e, 1)
        if not isinstance(v, int) or v < 0:
            raise InputError(f"bound of {e!r} must be a non-negative int")
        out[e] = v
    return out


def pack_h_independent(
    core: CoreSystem, h: Mapping | None = None, c: Mapping | None = None, d: AssocDigraph | None = None
) -> PackingCertificate:
    """Max h-independent family of (c-cheapest) stable matchings and a
    minimum h-blocker of equal value.  Bounds default to 1."""
    d = d or core.digraph
    if core.n == 0:
        raise ContractError("empty core: every family is unbounded")
    bounds = _bounds(core, h)
    ring = d.ring
    if c is not None:
        shifted, _ = _shifted(core, c)
        ring, _ = minimizer_ring(core, d, shifted)
    chain, blocker, value = pack_members(d.stable_arcs, bounds, ring)
    family = tuple((matching_of(core, d, z), k) for z, k in chain)
    return PackingCertificate(family, frozenset(blocker), value)


def pack_unit_two_phase(core_or_ring, arcs: Mapping | None = None) -> PackingCertificate:
    """h = 1 packing by the two-phase greedy.

    Given a core, works on its digraph and returns matchings; given a ring
    plus ``arcs``, returns ring members.
    """
    if isinstance(core_or_ring, CoreSystem):
        core = core_or_ring
        if core.n == 0:
            raise ContractError("empty core: every family is unbounded")
        d = core.digraph
        chain, blocker, value = pack_members_unit(d.stable_arcs, d.ring)
        family = tuple((matching_of(core, d, z), k) for z, k in chain)
    else:
        if arcs is None:
            raise InputError("arcs are required with a bare ring")
        chain, blocker, value = pack_members_unit(arcs, core_or_ring)
        family = tuple(chain)
    return PackingCertificate(family, frozenset(blocker), value)
