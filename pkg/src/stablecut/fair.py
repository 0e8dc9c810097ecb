"""Level-fair stable matchings.

A level assignment gives each node a distinct positive level for every
stable edge at it, larger for better edges.  A stable matching is fair when
its vector of level counts (how many nodes sit at level 1, at level 2, ...)
is lexicographically smallest.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .assoc import AssocDigraph
from .core import CoreSystem
from .errors import InputError
from .optimize import _best_member, minimizer_ring


@dataclass(frozen=True)
class FairSignature:
    levels: tuple  # lambda_1 < ... < lambda_k
    counts: tuple  # beta_1 .. beta_k, summing to 2n


def _stable_order(core: CoreSystem, v: str) -> list:
    return [e for e in core.system.prefs[v] if e in core.stable_edges]


def validate_levels(core: CoreSystem, levels: Mapping) -> dict:
    """Check a level assignment and return it restricted to stable edges.

    Keys are ``(node, edge id)``.  Entries for non-stable edges are ignored.
    """
    g = core.system
    out = {}
    for v in g.prefs:
        order = _stable_order(core, v)
        previous = None
        for e in order:
            key = (v, e)
            if key not in levels:
                raise InputError(f"no level for node {v!r} on edge {e!r}")
            lv = levels[key]
            if not isinstance(lv, int) or isinstance(lv, bool) or lv < 1:
                raise InputError(f"level of {key!r} must be a positive integer")
            if previous is not None and lv >= previous:
                raise InputError(f"levels at {v!r} must decrease from best to worst edge")
            previous = lv
            out[key] = lv
    for (v, e) in levels:
        if e not in g.edge or v not in g.ends(e):
            raise InputError(f"level given for {v!r} on non-incident edge {e!r}")
    return out


def rank_levels(core: CoreSystem) -> dict:
    """Worst stable edge at a node gets level 1, the next worse 2, and so on."""
    out = {}
    for v in core.system.prefs:
        order = _stable_order(core, v)
        for i, e in enumerate(order):
            out[(v, e)] = len(order) - i
    return out


def _top(core, levels):
    return max([2 * len(core.stable_edges)] + list(levels.values()))


def level_count_vector(core: CoreSystem, levels: Mapping, m: Iterable[str]) -> tuple:
    """Entry i-1 counts the nodes whose partner edge in ``m`` has level i."""
    levels = validate_levels(core, levels)
    counts = [0] * _top(core, levels)
    for e in m:
        for v in core.system.ends(e):
            counts[levels[(v, e)] - 1] += 1
    return tuple(counts)


def fair_stable_matching(core: CoreSystem, levels: Mapping, d: AssocDigraph | None = None):
    """Stable matching with lexicographically smallest level-count vector.

    Stage i picks the largest level lambda_i such that some matching in the
    current set puts every node at a level already fixed or at least
    lambda_i (found by binary search over the levels in use), then
    minimizes the number of nodes at lambda_i.  Each set is
    kept implicitly as a sub-ring.  Returns ``(matching, FairSignature)``.
    """
    d = d or core.digraph
    levels = validate_levels(core, levels)
    g = core.system
    ring = d.ring
    fixed, betas = [], []
    values = sorted(set(levels.values()))
    while sum(betas) < 2 * core.n:
        floor = fixed[-1] if fixed else 0
        candidates = [x for x in values if x > floor]

        def feasible(lam):
            penalty = {
                e: int(any(levels[(v, e)] < lam and levels[(v, e)] not in fixed for v in g.ends(e)))
                for e in core.stable_edges
            }
            narrowed, value = minimizer_ring(core, d, penalty, ring)
            return narrowed if value == 0 else None

        # Feasibility only gets harder as lambda grows, and the smallest
        # candidate is feasible because the previous stage left no node
        # strictly between the fixed levels and it.
        lo, hi = 0, len(candidates) - 1
        best = feasible(candidates[0])
        if best is None:
            raise AssertionError("smallest candidate level is infeasible")
        while lo < hi:
            mid = (lo + hi + 1) // 2
            narrowed = feasible(candidates[mid])
            if narrowed is None:
                hi = mid - 1
            else:
                lo, best = mid, narrowed
        chosen, ring = candidates[lo], best
        at = {e: sum(1 for v in g.ends(e) if levels[(v, e)] == chosen) for e in core.stable_edges}
        ring, beta = minimizer_ring(core, d, at, ring)
        fixed.append(chosen)
        betas.append(beta)
    return _best_member(core, d, ring), FairSignature(tuple(fixed), tuple(betas))


def worst_edge_minimizer(core: CoreSystem, d: AssocDigraph | None = None):
    """Stable matching with fewest nodes on their worst stable edge;
    returns ``(matching, count)``."""
    d = d or core.digraph
    worst = {}
    for v in core.system.prefs:
        order = _stable_order(core, v)
        if order:
            worst[v] = order[-1]
    cost = {e: sum(1 for v in core.system.ends(e) if worst.get(v) == e) for e in core.stable_edges}
    ring, value = minimizer_ring(core, d, cost)
    return _best_member(core, d, ring), value
