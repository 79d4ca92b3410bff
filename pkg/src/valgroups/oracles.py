"""Slow, obviously-correct reference computations.

Each function here recomputes something the main modules compute by a
different route, so property runs can compare the two.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .groups import FiniteAbelianGroup, GroupHom, automorphisms
from .rational import INF
from .values import CostFunction, Semivalue, ValuedGroup


def completion_by_relaxation(c: CostFunction, max_len: int | None = None) -> tuple:
    """``min sum c(h_j)`` over decompositions ``x = h_1 + ... + h_k`` with
    ``k <= max_len`` (default ``|G|``), by ``k`` rounds of relaxation."""
    G = c.group
    n = G.order
    max_len = n if max_len is None else max_len
    elems = G.elements
    best = [INF] * n
    best[0] = Fraction(0)
    atoms = [(h, v) for h, v in zip(elems, c.table) if v != INF and h != G.zero]
    for _ in range(max_len):
        nxt = list(best)
        for i, x in enumerate(elems):
            if best[i] == INF:
                continue
            for h, v in atoms:
                j = G.index(G.add(x, h))
                if best[i] + v < nxt[j]:
                    nxt[j] = best[i] + v
        if nxt == best:
            break
        best = nxt
    return tuple(best)


def trvN_by_tuples(f, N: int):
    """The exponent-N condition over all ordered N-tuples from the domain."""
    G, p = f.base.group, f.base
    dom = f.domain
    for tup in itertools.product(dom, repeat=N):
        lhs = abs(p(G.sum(tup)) - f(tup[-1]))
        if lhs > sum(f(a) for a in tup[:-1]):
            return False, tup
    return True, None


def amalgam_fiber_value(D1: ValuedGroup, D2: ValuedGroup, phi1: dict, phi2: dict, D0_elements, x1, x2) -> Fraction:
    """``min_{x0} lam1(x1 - phi1(x0)) + lam2(x2 + phi2(x0))``: the least sum
    over the coset of ``(x1, x2)`` modulo the glued copy of ``D0``."""
    G1, G2 = D1.group, D2.group
    return min(D1(G1.sub(x1, phi1[x0])) + D2(G2.add(x2, phi2[x0])) for x0 in D0_elements)


def isometric_iso_by_automorphisms(A: ValuedGroup, B: ValuedGroup) -> bool:
    """Same invariant factors and some automorphism carrying one table to the other."""
    if A.group.factors != B.group.factors:
        return False
    G = A.group
    return any(all(A(x) == B(a(x)) for x in G.elements) for a in automorphisms(G))


def extension_exists(H: ValuedGroup, G: ValuedGroup, fixed: dict) -> bool:
    """Exhaustive search over all generator images (no pruning)."""
    HG, GG = H.group, G.group
    for images in itertools.product(GG.elements, repeat=HG.rank):
        if any(GG.mul(n, g) != GG.zero for n, g in zip(HG.factors, images)):
            continue
        try:
            hom = GroupHom.from_images(HG, GG, images)
        except Exception:
            continue
        if all(hom(k) == v for k, v in fixed.items()) and all(G(hom(x)) == H(x) for x in HG.elements):
            if len(set(hom.mapping.values())) == HG.order:
                return True
    return False


def semivalue_is_largest_below(s: Semivalue, c: CostFunction) -> bool:
    """``s <= c`` and ``s`` is subadditive; with the relaxation oracle this pins
    ``s`` down as the largest such function."""
    G = s.group
    if any(a > b for a, b in zip(s.table, c.table)):
        return False
    for x, y in itertools.product(G.elements, repeat=2):
        if s(G.add(x, y)) > s(x) + s(y):
            return False
    return True


def word_metric_by_relaxation(G: FiniteAbelianGroup, gens) -> tuple:
    costs = {g: Fraction(1) for g in gens}
    return completion_by_relaxation(CostFunction.from_mapping(G, costs))


__all__ = [
    "amalgam_fiber_value",
    "completion_by_relaxation",
    "extension_exists",
    "isometric_iso_by_automorphisms",
    "semivalue_is_largest_below",
    "trvN_by_tuples",
    "word_metric_by_relaxation",
]
