"""Time the main pipeline on growing instances.

Run:  python demos/scaling.py
"""
import time

from stablecut import oracle
from stablecut.core import reduce_to_core
from stablecut.fair import fair_stable_matching, rank_levels
from stablecut.optimize import cheapest_stable_matching, pack_h_independent


def run(g):
    start = time.perf_counter()
    core = reduce_to_core(g)
    pack_h_independent(core)
    cheapest_stable_matching(core, {e: len(e) % 5 for e in core.stable_edges})
    fair_stable_matching(core, rank_levels(core))
    return time.perf_counter() - start, len(core.stable_edges)


def main():
    print(f"{'n':>4} {'kind':<8} {'stable edges':>12} {'seconds':>8}")
    for n in (10, 20, 30, 40, 50):
        for kind, g in (
            ("uniform", oracle.random_instance(n, n, 1.0, n)),
            ("cyclic", oracle.near_cyclic_instance(n, n, swaps=0, drop=0.0)),
        ):
            seconds, edges = run(g)
            print(f"{n:>4} {kind:<8} {edges:>12} {seconds:>8.2f}")


if __name__ == "__main__":
    main()
