"""Brute-force ground truth and shared fixtures.

Nothing here calls the solvers; only the ``PreferenceSystem`` data model and
plain enumeration are used.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Mapping, Sequence

from .core import Edge, PreferenceSystem
from .errors import ResourceError


# ---------------------------------------------------------------- fixtures

def fixture_i1() -> PreferenceSystem:
    return PreferenceSystem.from_lists({"u1": ["w1"]}, {"w1": ["u1"]})


def fixture_i2() -> PreferenceSystem:
    return PreferenceSystem.from_lists(
        {"u1": ["w1", "w2"], "u2": ["w2", "w1"]},
        {"w1": ["u2", "u1"], "w2": ["u1", "u2"]},
    )


def fixture_i3() -> PreferenceSystem:
    boys = {f"u{i}": [f"w{(i + k - 1) % 3 + 1}" for k in range(3)] for i in (1, 2, 3)}
    girls = {f"w{j}": [f"u{(j + k) % 3 + 1}" for k in range(3)] for j in (1, 2, 3)}
    return PreferenceSystem.from_lists(boys, girls)


I2_MB = frozenset({"u1w1", "u2w2"})
I2_MG = frozenset({"u1w2", "u2w1"})
I3_M0 = frozenset({"u1w1", "u2w2", "u3w3"})
I3_M1 = frozenset({"u1w2", "u2w3", "u3w1"})
I3_M2 = frozenset({"u1w3", "u2w1", "u3w2"})

FIXTURES = {"I1": fixture_i1, "I2": fixture_i2, "I3": fixture_i3}


def random_instance(n_boys: int, n_girls: int, edge_density: float, seed: int) -> PreferenceSystem:
    """Seeded random simple instance; nodes u1.. / w1.., edge ids u<i>w<j>."""
    rng = random.Random(seed)
    boys = [f"u{i}" for i in range(1, n_boys + 1)]
    girls = [f"w{j}" for j in range(1, n_girls + 1)]
    edges = [Edge(u + w, u, w) for u in boys for w in girls if rng.random() < edge_density]
    prefs = {v: [] for v in boys + girls}
    for e in edges:
        prefs[e.boy].append(e.id)
        prefs[e.girl].append(e.id)
    for v in boys + girls:
        rng.shuffle(prefs[v])
    used = {e.boy for e in edges} | {e.girl for e in edges}
    return PreferenceSystem(
        [u for u in boys if u in used],
        [w for w in girls if w in used],
        edges,
        {v: p for v, p in prefs.items() if v in used},
    )


def near_cyclic_instance(n: int, seed: int, swaps: int = 2, drop: float = 0.1) -> PreferenceSystem:
    """Cyclic (Latin-square) preferences with a few random adjacent swaps and
    dropped edges.  Unlike uniform instances these tend to have many stable
    matchings."""
    rng = random.Random(seed)
    boys = {f"u{i + 1}": [f"w{(i + k) % n + 1}" for k in range(n)] for i in range(n)}
    girls = {f"w{j + 1}": [f"u{(j + 1 + k) % n + 1}" for k in range(n)] for j in range(n)}
    for prefs in (boys, girls):
        for order in prefs.values():
            for _ in range(rng.randint(0, swaps)):
                i = rng.randrange(max(1, n - 1))
                order[i:i + 2] = order[i:i + 2][::-1]
    for u in boys:
        for w in list(boys[u]):
            if rng.random() < drop:
                boys[u].remove(w)
                girls[w].remove(u)
    return PreferenceSystem.from_lists(boys, girls)


# ------------------------------------------------------------- definitions

def definitely_stable(system: PreferenceSystem, m: Iterable[str]) -> bool:
    """Stability straight from the definition."""
    m = set(m)
    mate = {}
    for eid in m:
        e = system.edge[eid]
        if e.boy in mate or e.girl in mate:
            return False
        mate[e.boy] = mate[e.girl] = eid
    for e in system.edges:
        if e.id in m:
            continue
        dominated = False
        for v in (e.boy, e.girl):
            if v in mate and system.prefs[v].index(mate[v]) < system.prefs[v].index(e.id):
                dominated = True
        if not dominated:
            return False
    return True


def enumerate_stable(system: PreferenceSystem, max_nodes: int = 8) -> list:
    """All stable matchings by backtracking over boys (sorted output)."""
    if len(system.boys) > max_nodes or len(system.girls) > max_nodes:
        raise ResourceError(f"enumeration bound {max_nodes} exceeded")
    boys = sorted(system.boys)
    pos = {v: {eid: i for i, eid in enumerate(order)} for v, order in system.prefs.items()}
    boy_edge: dict = {}
    girl_edge: dict = {}
    found = []

    def blocks(eid):
        e = system.edge[eid]
        bu = boy_edge.get(e.boy)
        gw = girl_edge.get(e.girl)
        return (bu is None or pos[e.boy][eid] < pos[e.boy][bu]) and (
            gw is None or pos[e.girl][eid] < pos[e.girl][gw]
        )

    def partial_ok(k):
        decided = boys[: k + 1]
        for u in decided:
            for eid in system.prefs[u]:
                if eid == boy_edge.get(u):
                    continue
                w = system.edge[eid].girl
                # only girls whose state is final can be tested: matched girls
                if w in girl_edge and blocks(eid):
                    return False
        return True

    def rec(k):
        if k == len(boys):
            m = frozenset(boy_edge.values())
            if definitely_stable(system, m):
                found.append(m)
            return
        u = boys[k]
        for eid in list(system.prefs[u]) + [None]:
            if eid is not None:
                w = system.edge[eid].girl
                if w in girl_edge:
                    continue
                boy_edge[u] = eid
                girl_edge[w] = eid
            if partial_ok(k):
                rec(k + 1)
            if eid is not None:
                del boy_edge[u]
                del girl_edge[w]

    rec(0)
    return sorted(found, key=lambda m: sorted(m))


def brute_min_blocker(system, family: Sequence, h: Mapping, max_edges: int = 20):
    """Minimum h-weight edge set meeting every matching in ``family``.

    Exhaustive branch and bound: an unhit matching forces one of its edges.
    Returns ``(value, blocker)``.
    """
    family = [frozenset(m) for m in family]
    universe = set().union(*family) if family else set()
    if len(universe) > max_edges:
        raise ResourceError(f"blocker search bound {max_edges} exceeded")
    best = [float("inf"), None]

    def rec(chosen, weight):
        if weight >= best[0]:
            return
        open_ = next((m for m in family if not (m & chosen)), None)
        if open_ is None:
            best[0], best[1] = weight, frozenset(chosen)
            return
        for e in sorted(open_, key=lambda x: (h[x], x)):
            rec(chosen | {e}, weight + h[e])

    rec(frozenset(), 0)
    return best[0], best[1]


def brute_max_packing(family: Sequence, h: Mapping | None = None) -> int:
    """Largest h-independent multiset of matchings (h defaults to 1)."""
    family = [frozenset(m) for m in family]
    best = 0

    def rec(i, usage, count):
        nonlocal best
        best = max(best, count)
        for j in range(i, len(family)):
            m = family[j]
            if all(usage.get(e, 0) < (1 if h is None else h[e]) for e in m):
                for e in m:
                    usage[e] = usage.get(e, 0) + 1
                rec(j, usage, count + 1)
                for e in m:
                    usage[e] -= 1

    rec(0, {}, 0)
    return best


def brute_max_union(family: Sequence, ell: int, w: Mapping) -> int:
    """Max weight of the union of ell (not necessarily distinct) matchings."""
    family = [frozenset(m) for m in family]
    if not family:
        return 0
    best = 0
    for combo in itertools.combinations_with_replacement(range(len(family)), ell):
        union = frozenset().union(*(family[i] for i in combo))
        best = max(best, sum(w[e] for e in union))
    return best


def brute_disjoint_min_cost(family: Sequence, ell: int, c: Mapping):
    """Min total cost of ell pairwise disjoint matchings, or None."""
    family = [frozenset(m) for m in family]
    best = None
    for combo in itertools.combinations(range(len(family)), ell):
        ms = [family[i] for i in combo]
        if any(a & b for a, b in itertools.combinations(ms, 2)):
            continue
        total = sum(c[e] for m in ms for e in m)
        if best is None or total < best:
            best = total
    return best


def level_counts(system, levels: Mapping, m: Iterable[str], top: int) -> tuple:
    counts = [0] * top
    for eid in m:
        e = system.edge[eid]
        for v in (e.boy, e.girl):
            counts[levels[(v, eid)] - 1] += 1
    return tuple(counts)


def brute_lex_fair(system, family: Sequence, levels: Mapping, top: int) -> tuple:
    """Lexicographically smallest level-count vector over the family."""
    return min(level_counts(system, levels, m, top) for m in family)


# ---------------------------------------------------------------- posets

def brute_antichains(elements: Sequence, less) -> list:
    """All antichains; ``less(a, b)`` is the strict order."""
    elements = list(elements)
    out = []

    def rec(i, chosen):
        if i == len(elements):
            out.append(frozenset(chosen))
            return
        rec(i + 1, chosen)
        x = elements[i]
        if all(not less(x, y) and not less(y, x) for y in chosen):
            chosen.append(x)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return out


def brute_max_antichain(elements: Sequence, less, w: Mapping | None = None) -> int:
    return max(sum(1 if w is None else w[x] for x in a) for a in brute_antichains(elements, less))


def brute_max_antichain_union(elements: Sequence, less, ell: int) -> int:
    """Largest subset that splits into ell antichains (colouring search)."""
    elements = list(elements)
    n = len(elements)
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        sub = [elements[i] for i in range(n) if mask >> i & 1]
        if _colourable(sub, less, ell):
            best = size
    return best


def _colourable(sub, less, k):
    colour = {}

    def rec(i):
        if i == len(sub):
            return True
        x = sub[i]
        for c in range(k):
            if all(colour[y] != c for y in sub[:i] if less(x, y) or less(y, x)):
                colour[x] = c
                if rec(i + 1):
                    return True
                del colour[x]
        return False

    return rec(0)


def random_poset(n: int, density: float, seed: int):
    """Random order on 0..n-1 from a random DAG, transitively closed.

    Returns ``(elements, pairs)`` with (a, b) meaning a is above b.
    """
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.add((perm[j], perm[i]))
    changed = True
    while changed:
        changed = False
        for a, b in list(pairs):
            for c, d in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    return list(range(n)), pairs


# ---------------------------------------------------------------- cuts

def brute_min_lcut(nodes: Sequence, arcs: Sequence, source, sink, ell: int, member=None):
    """Minimum capacity of ell arc-disjoint cuts whose shores form a chain.

    ``arcs`` holds ``(id, tail, head, capacity)``; ``member`` optionally
    filters shores.  Returns None when no finite solution exists.
    """
    inner = [v for v in nodes if v not in (source, sink)]
    shores = []
    for mask in range(1 << len(inner)):
        z = frozenset([source] + [inner[i] for i in range(len(inner)) if mask >> i & 1])
        if member is not None and not member(z):
            continue
        out = frozenset(a[0] for a in arcs if a[1] in z and a[2] not in z)
        cap = sum(a[3] for a in arcs if a[0] in out)
        if cap != float("inf"):
            shores.append((z, out, cap))
    shores.sort(key=lambda s: len(s[0]))
    best = [None]

    def rec(last, used, k, total):
        if best[0] is not None and total >= best[0]:
            return
        if k == ell:
            best[0] = total
            return
        for z, out, cap in shores:
            # equal shores are allowed; disjointness rules out repeating a non-empty cut
            if last is not None and not (last[0] <= z):
                continue
            if out & used:
                continue
            rec((z,), used | out, k + 1, total + cap)

    rec(None, frozenset(), 0, 0)
    return best[0]
