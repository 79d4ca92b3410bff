"""Word metric on Z_N^N with generators +-e_j and e_j - e_k.

Prints the norm of a few elements.  The sum of all basis vectors needs
N - 1 generators even though every single e_j costs 1: writing it as
(e_1 - e_2) + ... walks around the cancellation that exponent N allows.
"""

from valgroups.free import standard_generators, word_metric


def main():
    for N in (3, 4, 5):
        F = standard_generators(N)
        v = word_metric(F)
        G = F.group
        e = [tuple(int(i == j) for i in range(N)) for j in range(N)]
        total = G.sum(e)
        print(f"N={N}: |G|={G.order}, ||e_1||={v(e[0])}, ||e_1-e_2||={v(G.sub(e[0], e[1]))}, ||sum e_j||={v(total)}")
        worst = max(v(G.sum([G.mul(n, x) for n, x in zip(c, e)]))
                    for c in _compositions(N, N))
        print(f"      max over compositions sum n_j = N of ||sum n_j e_j|| = {worst}")


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


if __name__ == "__main__":
    main()
