"""Minimum-capacity l-cuts, disjoint cheapest stable matchings, max unions.

An l-cut is the union of l arc-disjoint s-t cuts.  Its minimum capacity
equals the maximum of ``l * amount(z) - surplus(z)`` over flows z, where the
surplus counts flow above capacity.  Both sides come out of one (0,1)-cost
primal-dual run on the network with every finite arc doubled by an
infinite-capacity copy of cost 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .assoc import AssocDigraph, matching_of
from .core import CoreSystem, Edge, PreferenceSystem, reduce_to_core
from .errors import InfeasibleError, InputError
from .flow import INF, Arc, Flow, FlowNetwork, Potential, min_cost_flow_unit_costs
from .optimize import _shifted, cost_vector, pack_h_independent
from .ringset import RingCode


@dataclass(frozen=True)
class LCut:
    shores: tuple  # nested frozensets Z_1 <= ... <= Z_l
    arcs: frozenset
    capacity: int


@dataclass(frozen=True)
class LCutCertificate:
    lcut: LCut
    flow: Flow
    potential: Potential
    dual_value: int
    network: FlowNetwork

    def violations(self) -> list:
        """Literal check of the optimality criteria; empty when certified."""
        net, z, cut = self.network, self.flow, self.lcut
        problems = []
        if not z.is_conserving(net):
            problems.append("flow does not conserve")
        for a, b in zip(cut.shores, cut.shores[1:]):
            if not a <= b:
                problems.append("shores are not nested")
        used = set()
        for shore in cut.shores:
            if net.source not in shore or net.sink in shore:
                problems.append("shore is not an s-but-not-t set")
            out = {a.id for a in net.arcs if a.tail in shore and a.head not in shore}
            if out & used:
                problems.append("cuts share an arc")
            used |= out
        if used != set(cut.arcs):
            problems.append("arc set differs from the union of the cuts")
        for a in net.arcs:
            g, val = a.capacity, z[a.id]
            if val > g and a.id not in cut.arcs:
                problems.append(f"O1 fails on {a.id!r}")
            if val < g and a.id in cut.arcs:
                problems.append(f"O2 fails on {a.id!r}")
            if val > 0 and any(a.head in s and a.tail not in s for s in cut.shores):
                problems.append(f"O3 fails on {a.id!r}")
        capacity = sum(net.arc_by_id[k].capacity for k in cut.arcs)
        if capacity != cut.capacity:
            problems.append("stated capacity is wrong")
        dual = len(cut.shores) * z.amount - z.surplus(net)
        if dual != self.dual_value:
            problems.append("stated dual value is wrong")
        if cut.capacity != self.dual_value:
            problems.append(f"primal {cut.capacity} differs from dual {self.dual_value}")
        return problems


def min_lcut(net: FlowNetwork, ell: int) -> LCutCertificate:
    """Minimum-capacity l-cut with its flow certificate.

    Requires every s-t path to carry at least ``ell`` finite-capacity arcs;
    otherwise ``InfeasibleError`` is raised.
    """
    if not isinstance(ell, int) or ell < 1:
        raise InputError("ell must be a positive integer")
    s, t = net.source, net.sink
    doubled = []
    for a in net.arcs:
        if a.head == s or a.tail == t:
            continue  # never leaves an s-but-not-t set
        doubled.append(Arc(("base", a.id), a.tail, a.head, a.capacity, 0))
        if a.capacity != INF:
            doubled.append(Arc(("copy", a.id), a.tail, a.head, INF, 1))
    work = FlowNetwork(net.nodes, doubled, s, t)
    try:
        z1, pi = min_cost_flow_unit_costs(work, ell, final_phase=False)
    except InfeasibleError as exc:
        raise InfeasibleError(f"no finite-capacity {ell}-cut exists") from exc

    values = {}
    for a in net.arcs:
        base, copy = z1[("base", a.id)], z1[("copy", a.id)]
        if copy and a.capacity != INF and base < a.capacity:
            moved = min(copy, a.capacity - base)
            base, copy = base + moved, copy - moved
        values[a.id] = base + copy
    amount = sum(values[a.id] for a in net.arcs if a.tail == s) - sum(
        values[a.id] for a in net.arcs if a.head == s
    )
    flow = Flow(values, amount)
    shores = tuple(frozenset(v for v in net.nodes if pi[v] <= i) for i in range(ell))
    arcs = frozenset(a.id for a in net.arcs if any(a.tail in z and a.head not in z for z in shores))
    capacity = sum(net.arc_by_id[k].capacity for k in arcs)
    dual = ell * amount - flow.surplus(net)
    return LCutCertificate(LCut(shores, arcs, capacity), flow, pi, dual, net)


def min_lcut_ring_compatible(net: FlowNetwork, ring: RingCode, ell: int) -> LCutCertificate:
    """Minimum l-cut whose shores are members of ``ring``."""
    if set(ring.ground) != set(net.nodes) or ring.source != net.source or ring.sink != net.sink:
        raise InputError("ring and network disagree on nodes, source or sink")
    extra = [Arc(("code", u, v), u, v) for u, v in ring.useful_arcs()]
    return min_lcut(FlowNetwork(net.nodes, net.arcs + tuple(extra), net.source, net.sink), ell)


class DisjointMatchings(NamedTuple):
    matchings: tuple
    cost: int
    certificate: LCutCertificate


def disjoint_stable_matchings_min_total_cost(
    core: CoreSystem, ell: int, c: Mapping | None, d: AssocDigraph | None = None
) -> DisjointMatchings:
    """``ell`` pairwise disjoint stable matchings of minimum total cost."""
    d = d or core.digraph
    packing = pack_h_independent(core, d=d)
    if packing.value < ell:
        raise InfeasibleError(
            f"only {packing.value} disjoint stable matchings exist", certificate=packing
        )
    original = cost_vector(core, c)
    shifted, _ = _shifted(core, c)
    arcs = tuple(Arc(e, *d.stable_arcs[e], shifted[e]) for e in sorted(d.stable_arcs))
    net = FlowNetwork(d.nodes, arcs, d.source, d.sink)
    cert = min_lcut_ring_compatible(net, d.ring, ell)
    matchings = tuple(matching_of(core, d, z) for z in cert.lcut.shores)
    total = sum(original[e] for m in matchings for e in m)
    return DisjointMatchings(matchings, total, cert)


def _copy_id(eid: str, k: int, taken: set) -> str:
    name = f"{eid}~{k}"
    while name in taken:
        name += "~"
    taken.add(name)
    return name


def parallel_extension(core: CoreSystem, ell: int):
    """System with ell-1 parallel copies of each stable edge.

    Each copy is worse for the girl and better for the boy than its edge, and
    sits next to it in both lists.  Returns ``(system, origin)`` where
    ``origin`` maps every edge id of the new system to an original id.
    """
    g = core.system
    taken = set(g.edge)
    copies = {e: [_copy_id(e, k, taken) for k in range(1, ell)] for e in sorted(core.stable_edges)}
    edges = list(g.edges)
    origin = {e.id: e.id for e in g.edges}
    for e, names in copies.items():
        boy, girl = g.ends(e)
        for name in names:
            edges.append(Edge(name, boy, girl))
            origin[name] = e
    prefs = {}
    for u in g.boys:
        prefs[u] = [x for e in g.prefs[u] for x in list(reversed(copies.get(e, []))) + [e]]
    for w in g.girls:
        prefs[w] = [x for e in g.prefs[w] for x in [e] + copies.get(e, [])]
    return PreferenceSystem(g.boys, g.girls, edges, prefs), origin


class UnionResult(NamedTuple):
    matchings: tuple
    weight: int
    certificate: LCutCertificate  # on the system with parallel copies


def max_weight_union(core: CoreSystem, ell: int, w: Mapping | None) -> UnionResult:
    """``ell`` stable matchings whose union has maximum weight."""
    if not isinstance(ell, int) or ell < 1:
        raise InputError("ell must be a positive integer")
    weight = cost_vector(core, w)
    if any(v < 0 for v in weight.values()):
        raise InputError("weights must be non-negative")
    system, origin = parallel_extension(core, ell)
    wide = reduce_to_core(system)
    scale = len(core.stable_edges) + 1
    lifted = {e: weight[e] * scale + 1 if origin[e] == e else 0 for e in wide.stable_edges}
    top = max(lifted.values(), default=0)
    result = disjoint_stable_matchings_min_total_cost(wide, ell, {e: top - v for e, v in lifted.items()})
    matchings = tuple(frozenset(origin[e] for e in m) for m in result.matchings)
    union = frozenset().union(*matchings)
    return UnionResult(matchings, sum(weight[e] for e in union), result.certificate)
