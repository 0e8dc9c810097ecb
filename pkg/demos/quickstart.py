"""Library tour on the three small fixtures.

Run:  python demos/quickstart.py
"""
from stablecut import oracle
from stablecut.core import reduce_to_core
from stablecut.fair import fair_stable_matching, rank_levels
from stablecut.lcut import disjoint_stable_matchings_min_total_cost, max_weight_union
from stablecut.optimize import cheapest_stable_matching, constrained_stable_matching, pack_h_independent


def show(title, value):
    print(f"{title:<38} {value}")


def main():
    i2 = reduce_to_core(oracle.fixture_i2())
    i3 = reduce_to_core(oracle.fixture_i3())

    show("I2 stable edges", sorted(i2.stable_edges))
    show("I2 girl-best matching", sorted(i2.girl_best_matching))

    c = {"u1w1": 3, "u2w2": 2, "u1w2": 1, "u2w1": 1}
    m, cost = cheapest_stable_matching(i2, c)
    show("I2 cheapest matching", f"{sorted(m)} cost {cost}")
    show("I2 forcing u1w1", sorted(constrained_stable_matching(i2, forced={"u1w1"})))

    cert = pack_h_independent(i3)
    show("I3 disjoint stable matchings", cert.value)
    show("I3 smallest blocker", sorted(cert.blocker))

    res = disjoint_stable_matchings_min_total_cost(i3, 2, {e: 1 for e in oracle.I3_M0})
    show("I3 two disjoint, avoiding M0", f"{[sorted(m) for m in res.matchings]} cost {res.cost}")
    show("I3 largest union of two", max_weight_union(i3, 2, {e: 1 for e in i3.stable_edges}).weight)

    m, sig = fair_stable_matching(i3, rank_levels(i3))
    show("I3 fair matching", f"{sorted(m)} levels {sig.levels} counts {sig.counts}")


if __name__ == "__main__":
    main()
