"""The order on stable edges, and chain/antichain dualities on it.

Run:  python demos/posets.py
"""
from stablecut import oracle
from stablecut.core import reduce_to_core
from stablecut.poset import (
    Poset,
    dilworth_weighted,
    greene_kleitman,
    induced_poset,
    mirsky_cover,
    pack_d_antichains,
)


def main():
    core = reduce_to_core(oracle.fixture_i3())
    p = induced_poset(core)
    print("order pairs (above, below):")
    for a, b in sorted(p.relation()):
        print(f"  {a} > {b}")

    cover = mirsky_cover(p, {x: 1 for x in p.elements})
    print("antichain cover:", [sorted(a) for a, _ in cover.family], "witness chain:", cover.chain)

    cert = dilworth_weighted(p, {x: 1 for x in p.elements})
    print("largest antichain:", sorted(cert.antichain), "chains:", [c for c, _ in cert.chains])

    gk = greene_kleitman(p, 2)
    print("two antichains cover", gk.value, "elements; orthogonal chains:", gk.chains)
    print("disjoint maximum antichains:", pack_d_antichains(p).value)

    # a general poset: the divisibility order on 1..12
    nums = range(1, 13)
    div = Poset(nums, [(b, a) for a in nums for b in nums if a != b and b % a == 0])
    for ell in (1, 2, 3):
        print(f"divisors 1..12, {ell} antichain(s) cover at most", greene_kleitman(div, ell).value)


if __name__ == "__main__":
    main()
