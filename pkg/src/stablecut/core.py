"""Bipartite preference systems, Gale-Shapley and the perfect-matching core."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ContractError, InputError

Matching = frozenset  # a frozenset of edge ids


@dataclass(frozen=True)
class Edge:
    id: str
    boy: str
    girl: str


class _ProposalTable(NamedTuple):
    options: dict  # proposer -> ((edge id, receiver, receiver's rank of it), ...)
    rank: dict  # edge id -> receiver's rank of it
    ends: dict  # edge id -> (receiver, proposer)


class PreferenceSystem:
    """Bipartite multigraph with strict per-node preferences over edge ids.

    ``prefs[v]`` lists the ids of the edges at v from best to worst.
    """

    def __init__(self, boys: Iterable[str], girls: Iterable[str], edges: Iterable, prefs: Mapping):
        self.boys = tuple(boys)
        self.girls = tuple(girls)
        self.edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        self.prefs = {v: tuple(prefs.get(v, ())) for v in self.boys + self.girls}
        self._validate(prefs)
        self.edge = {e.id: e for e in self.edges}
        self.rank = {v: {eid: r for r, eid in enumerate(order)} for v, order in self.prefs.items()}

    def _validate(self, prefs):
        boys, girls = set(self.boys), set(self.girls)
        if len(boys) != len(self.boys) or len(girls) != len(self.girls):
            raise InputError("duplicate node id")
        if boys & girls:
            raise InputError(f"node ids used on both sides: {sorted(boys & girls)}")
        extra = set(prefs) - boys - girls
        if extra:
            raise InputError(f"preferences for unknown nodes: {sorted(extra)}")
        incident = {v: set() for v in self.boys + self.girls}
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise InputError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.boy not in boys or e.girl not in girls:
                raise InputError(f"edge {e.id!r} joins unknown nodes")
            incident[e.boy].add(e.id)
            incident[e.girl].add(e.id)
        for v, order in self.prefs.items():
            if len(set(order)) != len(order):
                raise InputError(f"preference list of {v!r} repeats an edge")
            if set(order) != incident[v]:
                raise InputError(f"preference list of {v!r} must list exactly its incident edges")

    @classmethod
    def from_lists(cls, boy_prefs: Mapping[str, Sequence[str]], girl_prefs: Mapping[str, Sequence[str]]):
        """Simple-graph constructor from neighbour lists; edge ids are boy+girl."""
        edges = []
        for u, ws in boy_prefs.items():
            for w in ws:
                edges.append(Edge(u + w, u, w))
        prefs = {u: [u + w for w in ws] for u, ws in boy_prefs.items()}
        prefs.update({w: [u + w for u in us] for w, us in girl_prefs.items()})
        return cls(boy_prefs.keys(), girl_prefs.keys(), edges, prefs)

    def __eq__(self, other):
        return (
            isinstance(other, PreferenceSystem)
            and self.boys == other.boys
            and self.girls == other.girls
            and self.edges == other.edges
            and self.prefs == other.prefs
        )

    def __hash__(self):
        return hash((self.boys, self.girls, self.edges))

    def __repr__(self):
        return f"PreferenceSystem(boys={len(self.boys)}, girls={len(self.girls)}, edges={len(self.edges)})"

    def proposal_table(self, girls_propose: bool) -> "_ProposalTable":
        """Per-proposer lists of (edge, receiver, receiver's rank), cached."""
        cache = self.__dict__.setdefault("_tables", {})
        if girls_propose not in cache:
            options, rank, ends = {}, {}, {}
            for v in self.girls if girls_propose else self.boys:
                row = []
                for eid in self.prefs[v]:
                    e = self.edge[eid]
                    r = e.boy if girls_propose else e.girl
                    rank[eid] = self.rank[r][eid]
                    ends[eid] = (r, v)
                    row.append((eid, r, rank[eid]))
                options[v] = tuple(row)
            cache[girls_propose] = _ProposalTable(options, rank, ends)
        return cache[girls_propose]

    def ends(self, eid: str) -> tuple[str, str]:
        e = self.edge[eid]
        return e.boy, e.girl

    def other(self, v: str, eid: str) -> str:
        e = self.edge[eid]
        return e.girl if v == e.boy else e.boy

    def prefers(self, v: str, e: str, f: str) -> bool:
        """True when v ranks edge e strictly above edge f."""
        return self.rank[v][e] < self.rank[v][f]

    def restricted(self, keep: Iterable[str]) -> "PreferenceSystem":
        """Subsystem on the edges in ``keep``; isolated nodes are dropped."""
        keep = set(keep)
        edges = [e for e in self.edges if e.id in keep]
        used = {e.boy for e in edges} | {e.girl for e in edges}
        prefs = {v: [x for x in order if x in keep] for v, order in self.prefs.items() if v in used}
        return PreferenceSystem(
            [u for u in self.boys if u in used], [w for w in self.girls if w in used], edges, prefs
        )

    def is_matching(self, m: Iterable[str]) -> bool:
        covered = set()
        for eid in m:
            u, w = self.ends(eid)
            if u in covered or w in covered:
                return False
            covered |= {u, w}
        return True

    def partner_edge(self, m: Iterable[str]) -> dict:
        """Map node -> its edge in matching m."""
        out = {}
        for eid in m:
            u, w = self.ends(eid)
            out[u] = out[w] = eid
        return out


def _check_ids(system: PreferenceSystem, m: Iterable[str]) -> frozenset:
    m = frozenset(m)
    unknown = [e for e in m if e not in system.edge]
    if unknown:
        raise InputError(f"unknown edge ids: {sorted(unknown)}")
    return m


def _deferred(system: PreferenceSystem, proposers: Sequence[str], allowed=None, banned=None, state=None):
    """Deferred acceptance; ``proposers`` is the proposing side.

    Edges outside ``allowed`` (when given) or inside ``banned`` are skipped.
    ``state`` resumes from an earlier ``(held, nxt)`` pair: held edges that
    are now banned are released and their proposers continue down their
    lists.  Returns the final ``(held, nxt)``.
    """
    girl_side = set(system.girls)
    girls_propose = any(v in girl_side for v in proposers)
    table = system.proposal_table(girls_propose)
    edge = system.edge
    if state is None:
        nxt = {v: 0 for v in proposers}
        held: dict = {}  # receiver -> edge id
        free = deque(sorted(proposers))
    else:
        held, nxt = dict(state[0]), dict(state[1])
        free = deque()
        for r, eid in sorted(state[0].items()):
            if banned is not None and eid in banned or allowed is not None and eid not in allowed:
                del held[r]
                free.append(edge[eid].girl if girls_propose else edge[eid].boy)
    # receiver -> (rank of held edge, its proposer)
    holding = {}
    for r, eid in held.items():
        _, p = table.ends[eid]
        holding[r] = (table.rank[eid], p)
    skip = banned if banned is not None else ()
    while free:
        p = free.popleft()
        options = table.options[p]
        i, stop = nxt[p], len(options)
        while i < stop:
            eid, r, rk = options[i]
            i += 1
            if eid in skip or allowed is not None and eid not in allowed:
                continue
            cur = holding.get(r)
            if cur is None:
                held[r] = eid
                holding[r] = (rk, p)
                break
            if rk < cur[0]:
                held[r] = eid
                holding[r] = (rk, p)
                free.append(cur[1])
                break
        nxt[p] = i
    return held, nxt


def _proposals(system: PreferenceSystem, proposers: Sequence[str], allowed=None, banned=None) -> frozenset:
    held, _ = _deferred(system, tuple(proposers), allowed, banned)
    return frozenset(held.values())


def gale_shapley(system: PreferenceSystem, proposing_side: str = "boys") -> frozenset:
    """Stable matching by deferred acceptance; optimal for the proposing side."""
    if proposing_side not in ("boys", "girls"):
        raise InputError("proposing_side must be 'boys' or 'girls'")
    side = system.boys if proposing_side == "boys" else system.girls
    return _proposals(system, side)


def is_stable(system: PreferenceSystem, m: Iterable[str]) -> bool:
    m = _check_ids(system, m)
    if not system.is_matching(m):
        return False
    mate = system.partner_edge(m)
    for e in system.edges:
        if e.id in m:
            continue
        if not any(v in mate and system.prefers(v, mate[v], e.id) for v in (e.boy, e.girl)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class CoreSystem:
    """Reduced system whose stable matchings are all perfect."""

    system: PreferenceSystem
    stable_edges: frozenset
    girl_best_matching: frozenset
    boy_best_matching: frozenset
    m_e: Mapping = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.system.girls)

    @cached_property
    def digraph(self):
        from .assoc import build

        return build(self)

    @cached_property
    def girl_paths(self) -> dict:
        """Stable edges at each girl, best first."""
        g = self.system
        return {w: tuple(e for e in g.prefs[w] if e in self.stable_edges) for w in g.girls}

    @cached_property
    def boy_paths(self) -> dict:
        g = self.system
        return {u: tuple(e for e in g.prefs[u] if e in self.stable_edges) for u in g.boys}


def _delete_dominated(system: PreferenceSystem) -> set:
    """Fixpoint of: for the best edge e=st at s, drop edges at t worse than e."""
    alive = {e.id for e in system.edges}
    prefs, rank = system.prefs, system.rank
    nodes = sorted(system.boys + system.girls)
    changed = True
    while changed:
        changed = False
        for s in nodes:
            best = next((e for e in prefs[s] if e in alive), None)
            if best is None:
                continue
            t = system.other(s, best)
            for f in prefs[t][rank[t][best] + 1:]:
                if f in alive:
                    alive.discard(f)
                    changed = True
    return alive


def _extend(system: PreferenceSystem, m: frozenset, start=None):
    """Girl-best stable matching containing the matching ``m``, or None.

    ``start`` may carry the final state of an unrestricted girl-proposing
    run when no girl of ``m`` holds there an edge worse than her edge in
    ``m``.  Every rejection made in that run then stays valid under the bans
    below, which only hit edges worse for an end of ``m`` than its edge.
    """
    banned = set(m)
    for eid in m:
        for v in system.ends(eid):
            banned.update(system.prefs[v][system.rank[v][eid] + 1:])
    held, _ = _deferred(system, system.girls, banned=banned, state=start)
    union = m | frozenset(held.values())
    return union if system.is_matching(union) else None


def reduce_to_core(system: PreferenceSystem) -> CoreSystem:
    reduced = system.restricted(_delete_dominated(system))
    start = _deferred(reduced, reduced.girls)
    girl_best = {reduced.edge[f].girl: f for f in start[0].values()}
    m_e = {}
    for e in sorted(x.id for x in reduced.edges):
        w = reduced.edge[e].girl
        if w not in girl_best or reduced.prefers(w, e, girl_best[w]):
            continue  # better than every stable partner of w
        found = _extend(reduced, frozenset([e]), start)
        if found is not None:
            m_e[e] = found
    return CoreSystem(
        system=reduced,
        stable_edges=frozenset(m_e),
        girl_best_matching=gale_shapley(reduced, "girls"),
        boy_best_matching=gale_shapley(reduced, "boys"),
        m_e=m_e,
    )


def extend_to_stable(core: CoreSystem, m: Iterable[str]):
    """Girl-best stable matching containing m, or None if there is none."""
    g = core.system
    m = _check_ids(g, m)
    if not g.is_matching(m):
        raise InputError("edge set is not a matching")
    return _extend(g, m)


def _require_stable(core: CoreSystem, ms):
    for m in ms:
        if not is_stable(core.system, m):
            raise ContractError(f"not a stable matching: {sorted(m)}")


def _pick(core: CoreSystem, ms, girl_better: bool) -> frozenset:
    ms = [_check_ids(core.system, m) for m in ms]
    if not ms:
        raise InputError("need at least one matching")
    _require_stable(core, ms)
    g = core.system
    mates = [g.partner_edge(m) for m in ms]
    out = set()
    for w in g.girls:
        choices = [mate[w] for mate in mates]
        key = lambda e: g.rank[w][e]
        out.add(min(choices, key=key) if girl_better else max(choices, key=key))
    return frozenset(out)


def meet(core: CoreSystem, *ms) -> frozenset:
    """Girl-best edges of the union (equally, boy-worst)."""
    return _pick(core, ms, True)


def join(core: CoreSystem, *ms) -> frozenset:
    """Girl-worst edges of the union (equally, boy-best)."""
    return _pick(core, ms, False)
