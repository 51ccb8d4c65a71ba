"""Counting k-phylogenetic trees and the limiting rank distribution.

Walks the exact counting surface: admissibility, tree counts, per-rank
censuses, and the closed-form limits they converge to.
"""

from fractions import Fraction

from phylorank import (
    CountTable,
    c_index,
    is_admissible,
    internal_vertices,
    limit_distribution,
    rank_eq_limit,
)
from phylorank.render import decimal_str


def main():
    print("=== admissibility ===")
    print("trees on n leaves exist iff (n-1) is divisible by (k-1):")
    for k in (2, 3, 4):
        admissible = [n for n in range(1, 14) if is_admissible(k, n)]
        print(f"  k={k}: n in {admissible} ...")
    print(f"  k=3, n=7 has s = {internal_vertices(3, 7)} internal vertices")

    print("\n=== exact counts (k=2: the double factorials) ===")
    table = CountTable(2, 24)
    for n in (2, 3, 4, 5, 6, 10, 24):
        print(f"  t(n={n}) = {table.tree_count(n)}")

    print("\n=== a census: who has which rank? ===")
    print("all 15 trees on 4 leaves, k=2: 105 vertices total")
    census = table.rank_census(4, 3)
    for i, (count, ratio) in enumerate(zip(census.exact, census.ratios)):
        print(f"  rank {i}: {count:3d} vertices  ({ratio} = {decimal_str(ratio)})")

    print("\n=== the limit distribution ===")
    print("as n grows, the rank-i fraction tends to k^(-c_i) - k^(-k*c_i-1):")
    for k in (2, 3):
        dist = limit_distribution(k, 3)
        row = ", ".join(
            f"P_{e.rank}={e.point_prob} ({decimal_str(e.point_prob)})"
            for e in dist.entries
        )
        print(f"  k={k}: {row}")

    print("\nthe exponents c_i explode doubly exponentially:")
    print("  k=2:", [c_index(2, i) for i in range(8)])
    print("  k=3:", [c_index(3, i) for i in range(6)])

    print("\nso rank probabilities collapse:"
          f" P_(2,5) = {rank_eq_limit(2, 5)} = {decimal_str(rank_eq_limit(2, 5))}")

    print("\n=== finite n vs the limit (exact rationals all the way) ===")
    big = CountTable(2, 201)
    limit = rank_eq_limit(2, 1)
    for n in (5, 25, 101, 201):
        census = big.rank_census(n, 1)
        got = census.ratios[1]
        print(
            f"  n={n:4d}: rank-1 fraction {str(got):>12s} = {decimal_str(got)}"
            f"   (limit 3/8, gap {decimal_str(abs(got - limit))})"
        )
        assert isinstance(got, Fraction)


if __name__ == "__main__":
    main()
