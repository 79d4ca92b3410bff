"""A subspace inclusion whose induced map of free groups is not isometric.

X has a hub 0 at distance 1/2 from three points that are pairwise 1 apart.
In Z_3[A] (A the three outer points) the element 1^ + 2^ + 3^ has value 2;
pushed into Z_3[X] it can route through the hub and drops to 3/2.
"""

from fractions import Fraction as F

from valgroups.free import FiniteMetricSpace, free_group, free_inclusion


def main():
    pairs = {(0, j): F(1, 2) for j in (1, 2, 3)}
    pairs.update({(1, 2): 1, (1, 3): 1, (2, 3): 1})
    X = FiniteMetricSpace.from_pairs((0, 1, 2, 3), pairs)
    A = X.subspace((1, 2, 3))
    for N in (2, 3):
        big, small = free_group(X, N), free_group(A, N)
        inc = free_inclusion(small, big)
        drops = [(x, small(x), big(inc(x))) for x in small.carrier.elements if big(inc(x)) != small(x)]
        print(f"N={N}: |Z_N[A]|={small.carrier.order}, |Z_N[X]|={big.carrier.order}, "
              f"elements whose value drops: {len(drops)}")
        for x, a, b in drops:
            print(f"   {small.full(x)}: {a} -> {b}")


if __name__ == "__main__":
    main()
