"""Seeded random instances for property runs.

Every generator takes a :class:`random.Random`.  :func:`stream` derives
independent, reproducible streams from one master seed and a label, so
suites can be reordered or run alone without changing their instances.
"""

from __future__ import annotations

import random
import zlib
from fractions import Fraction

import numpy as np

from .errors import BudgetError, ValuedGroupError
from .extension import KatetovMap, check_trvN
from .fraisse import group_shapes
from .free import FiniteMetricSpace
from .groups import FiniteAbelianGroup, GroupHom, Subgroup, all_subgroups, automorphisms
from .piecewise import Modulus, PiecewiseLinear
from .rational import INF
from .values import CostFunction, ValuedGroup, complete_cost, validate_value


def stream(seed: int, label: str) -> random.Random:
    """Child generator for ``label`` split off the master ``seed``."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(label.encode())])
    return random.Random(int(ss.generate_state(2, dtype=np.uint64)[0]))


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy) & 0xFFFFFFFFFFFFFFFF


def grid_value(rng: random.Random, log2_den: int, lo: Fraction, hi: Fraction) -> Fraction:
    """Uniform multiple of ``2^-m`` in ``[lo, hi]`` (``lo`` rounded up)."""
    den = 2**log2_den
    a = -(-lo * den // 1)
    b = hi * den // 1
    return Fraction(rng.randint(int(a), int(b)), den)


def random_shape(rng: random.Random, max_order: int, N: int = 0, min_order: int = 1) -> FiniteAbelianGroup:
    shapes = [s for s in group_shapes(max_order, N) if int(np.prod(s or (1,))) >= min_order]
    return FiniteAbelianGroup(rng.choice(shapes))


def random_value(
    rng: random.Random, G: FiniteAbelianGroup, log2_den: int = 3, cap=INF, N: int = 0, top: Fraction = Fraction(2)
) -> ValuedGroup:
    """Completion of random grid costs on every element, capped at ``cap``.

    Sums of grid points stay on the grid, so the result is grid-valued.
    """
    if cap == 1:
        top = min(top, Fraction(1))
    costs = {}
    for x in G.elements:
        if x != G.zero and x not in costs:
            c = grid_value(rng, log2_den, Fraction(1, 2**log2_den), top)
            costs[x] = costs[G.neg(x)] = c
    table = list(complete_cost(CostFunction.from_mapping(G, costs)).table)
    if cap != INF:
        table = [min(t, cap) for t in table]
    return validate_value(G, table, cap, N)


def random_cost(rng: random.Random, G: FiniteAbelianGroup, log2_den: int = 3, p_inf: float = 0.3) -> CostFunction:
    """Random symmetric grid costs, some infinite."""
    costs = {}
    for x in G.elements:
        if x == G.zero or x in costs:
            continue
        c = INF if rng.random() < p_inf else grid_value(rng, log2_den, Fraction(1, 2**log2_den), Fraction(2))
        costs[x] = costs[G.neg(x)] = c
    return CostFunction(G, tuple(Fraction(0) if x == G.zero else costs[x] for x in G.elements))


def random_subgroup(rng: random.Random, G: FiniteAbelianGroup) -> Subgroup:
    return rng.choice(all_subgroups(G))


def random_katetov(
    rng: random.Random,
    G: ValuedGroup,
    size: int,
    log2_den: int = 3,
    cap=INF,
    N: int | None = None,
    tries: int = 200,
    positive: bool = True,
    bound=None,
) -> KatetovMap:
    """A Katetov map on ``size`` random points with grid values.

    Rejection-samples values in ``(0, bound]`` (default: the larger of the
    diameter and one grid step) until the Katetov inequalities and, for
    ``N > 2``, the exponent condition hold.  Falls back to the distances
    from a point outside the domain, which always qualify.
    """
    grp = G.group
    size = min(size, grp.order - (1 if positive else 0))
    dom = rng.sample(list(grp.elements), max(size, 1))
    step = Fraction(1, 2**log2_den)
    hi = max(G.diameter(), step) if bound is None else bound
    if cap != INF:
        hi = min(hi, Fraction(cap))
    for _ in range(tries):
        f = {a: grid_value(rng, log2_den, step if positive else Fraction(0), hi) for a in dom}
        try:
            km = KatetovMap(G, f, cap)
        except ValuedGroupError:
            continue
        if N and N > 2 and not check_trvN(km, N)[0]:
            continue
        return km
    rest = [b for b in grp.elements if b not in dom]
    if not rest:
        dom = dom[:-1]
        rest = [b for b in grp.elements if b not in dom]
    b = rng.choice(rest)
    return KatetovMap.realized_by(G, b, dom, cap)


def random_metric_space(rng: random.Random, n: int, log2_den: int = 2, top: Fraction = Fraction(2)) -> FiniteMetricSpace:
    """Shortest-path closure of random positive grid weights on ``K_n``."""
    step = Fraction(1, 2**log2_den)
    d = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = grid_value(rng, log2_den, step, top)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return FiniteMetricSpace(tuple(range(n)), tuple(tuple(r) for r in d))


def random_modulus(rng: random.Random, log2_den: int = 2, pieces: int = 3, nonvanishing: bool = True) -> Modulus:
    """Concave nondecreasing piecewise-linear ``w`` with ``w(0) = 0``."""
    step = Fraction(1, 2**log2_den)
    xs = sorted({grid_value(rng, log2_den, step, Fraction(3)) for _ in range(pieces)})
    slopes = sorted((grid_value(rng, log2_den, step, Fraction(2)) for _ in range(len(xs) + 1)), reverse=True)
    tail = slopes[-1] if nonvanishing or rng.random() < 0.5 else Fraction(0)
    pts = [(Fraction(0), Fraction(0))]
    y = Fraction(0)
    prev = Fraction(0)
    for x, s in zip(xs, slopes):
        y += s * (x - prev)
        pts.append((x, y))
        prev = x
    return Modulus.validate(PiecewiseLinear.from_points(pts, tail))


def embed_with_room(
    rng: random.Random, D0: ValuedGroup, extra: tuple, log2_den: int = 3, cap=INF, N: int = 0
) -> tuple:
    """``D = D0 x C`` (``C`` with invariant factors ``extra``) carrying a value
    that restricts to ``D0`` on ``D0 x {0}``; returns ``(D, inclusion)``.

    Atoms off ``D0 x {0}`` cost at least half the diameter of ``D0``; a
    decomposition of an element of ``D0 x {0}`` uses either none of them or
    at least two, so the restriction is exact.
    """
    G0 = D0.group
    C = FiniteAbelianGroup(extra)
    G = G0.direct_product(C)
    half = max(D0.diameter() / 2, Fraction(1, 2**log2_den))
    top = max(half * 2, Fraction(1))
    if cap == 1:
        top = Fraction(1)
    k = G0.rank
    costs = {}
    for x in G.elements:
        if x == G.zero or x in costs:
            continue
        if all(c == 0 for c in x[k:]):
            c = D0(x[:k])
        else:
            c = grid_value(rng, log2_den, half, max(top, half))
        costs[x] = costs[G.neg(x)] = c
    table = list(complete_cost(CostFunction.from_mapping(G, costs)).table)
    if cap != INF:
        table = [min(t, cap) for t in table]
    D = validate_value(G, table, cap, N)
    inc = GroupHom(G0, G, {x: x + C.zero for x in G0.elements})
    return D, inc


def perturb_value(rng: random.Random, D: ValuedGroup, keep: Subgroup, eps: Fraction, log2_den: int = 3) -> ValuedGroup:
    """Completion of ``lam * (1 + delta_x)`` off ``keep`` (``0 <= delta <= eps``);
    exact on ``keep`` and ``eps``-close multiplicatively everywhere."""
    G = D.group
    members = set(keep.elements)
    costs = {}
    for x in G.elements:
        if x == G.zero or x in costs:
            continue
        if x in members:
            c = D(x)
        else:
            c = D(x) * (1 + grid_value(rng, log2_den, Fraction(0), eps))
            if D.cap == 1:
                c = min(c, Fraction(1))
        costs[x] = costs[G.neg(x)] = c
    table = list(complete_cost(CostFunction.from_mapping(G, costs)).table)
    return validate_value(G, table, D.cap, D.exponent)


def isometric_automorphisms(D: ValuedGroup, limit: int = 2000) -> list:
    """Isometric automorphisms of ``D``; just the identity when the group has
    more than ``limit`` endomorphisms."""
    try:
        autos = automorphisms(D.group, limit)
    except BudgetError:
        return [GroupHom.identity(D.group)]
    return [a for a in autos if all(D(a(x)) == D(x) for x in D.group.elements)]


__all__ = [
    "embed_with_room",
    "fresh_seed",
    "grid_value",
    "isometric_automorphisms",
    "perturb_value",
    "random_cost",
    "random_katetov",
    "random_metric_space",
    "random_modulus",
    "random_shape",
    "random_subgroup",
    "random_value",
    "stream",
]
