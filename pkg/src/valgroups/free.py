"""Free valued groups over finite metric spaces, and word metrics.

``Z_N[X]`` is the group of zero-sum functions ``X -> Z_N``.  It is stored
as ``Z_N^(|X|-1)``: the coordinate of the last point is implied by the
zero-sum constraint.  Its value ``p_d`` is the cheapest way of writing an
element as a sum of differences ``x^ - y^`` priced at ``d(x, y)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import AxiomViolation, BudgetError, PostconditionError, PreconditionError
from .groups import DEFAULT_MAX_ORDER, Element, FiniteAbelianGroup, GroupHom, subgroup_generated
from .rational import INF, as_rational
from .values import CostFunction, ValuedGroup, complete_cost, validate_value


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    points: tuple
    d: tuple  # square matrix of Fractions, indexed like ``points``

    def __post_init__(self):
        pts = tuple(self.points)
        n = len(pts)
        if n == 0:
            raise PreconditionError("metric space must be nonempty")
        if len(set(pts)) != n:
            raise PreconditionError("duplicate point labels")
        d = tuple(tuple(as_rational(v) for v in row) for row in self.d)
        if len(d) != n or any(len(row) != n for row in d):
            raise PreconditionError("distance matrix has the wrong shape")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "d", d)
        for i, j in itertools.product(range(n), repeat=2):
            if d[i][j] != d[j][i]:
                raise AxiomViolation("metric symmetry", (pts[i], pts[j]))
            if (d[i][j] == 0) != (i == j) or d[i][j] < 0 or d[i][j] == INF:
                raise AxiomViolation("metric positivity", (pts[i], pts[j]))
        for i, j, k in itertools.product(range(n), repeat=3):
            if d[i][k] > d[i][j] + d[j][k]:
                raise AxiomViolation("triangle inequality", (pts[i], pts[j], pts[k]))

    @classmethod
    def from_pairs(cls, points: Sequence[Hashable], pairs: Mapping) -> FiniteMetricSpace:
        """``pairs`` maps ``(a, b)`` label pairs (either orientation) to distances."""
        pts = tuple(points)
        idx = {p: i for i, p in enumerate(pts)}
        n = len(pts)
        d = [[Fraction(0)] * n for _ in range(n)]
        seen = set()
        for (a, b), v in pairs.items():
            i, j = idx[a], idx[b]
            d[i][j] = d[j][i] = as_rational(v)
            seen.add(frozenset((i, j)))
        for i, j in itertools.combinations(range(n), 2):
            if frozenset((i, j)) not in seen:
                raise PreconditionError(f"missing distance for ({pts[i]}, {pts[j]})")
        return cls(pts, tuple(tuple(r) for r in d))

    def __len__(self):
        return len(self.points)

    def index(self, label) -> int:
        return self.points.index(label)

    def dist(self, a, b) -> Fraction:
        return self.d[self.index(a)][self.index(b)]

    def subspace(self, labels: Sequence[Hashable]) -> FiniteMetricSpace:
        ids = [self.index(a) for a in labels]
        return FiniteMetricSpace(tuple(labels), tuple(tuple(self.d[i][j] for j in ids) for i in ids))

    def diameter(self) -> Fraction:
        return max((v for row in self.d for v in row), default=Fraction(0))


def mu(space: FiniteMetricSpace, labels) -> Fraction:
    """``max_x min_{y != x} d(x, y)`` over the given points; 0 below two points."""
    ids = [space.index(a) for a in labels]
    if len(ids) < 2:
        return Fraction(0)
    return max(min(space.d[i][j] for j in ids if j != i) for i in ids)


@dataclass(frozen=True, eq=False)
class FreeValuedGroup:
    space: FiniteMetricSpace
    N: int
    value: ValuedGroup

    @property
    def carrier(self) -> FiniteAbelianGroup:
        return self.value.group

    def full(self, x: Element) -> tuple:
        """All ``|X|`` coordinates of a carrier element."""
        return tuple(x) + ((-sum(x)) % self.N,)

    def element(self, coeffs: Mapping | Sequence) -> Element:
        """Carrier element from per-point coefficients (must sum to 0 mod N)."""
        if isinstance(coeffs, Mapping):
            vec = [0] * len(self.space)
            for a, c in coeffs.items():
                vec[self.space.index(a)] += c
        else:
            vec = list(coeffs)
        vec = [c % self.N for c in vec]
        if sum(vec) % self.N:
            raise PreconditionError("coefficients do not sum to zero")
        return tuple(vec[:-1])

    def hat_diff(self, a, b) -> Element:
        """``a^ - b^``."""
        return self.element({a: 1, b: -1}) if a != b else self.carrier.zero

    def support(self, x: Element) -> list:
        return [p for p, c in zip(self.space.points, self.full(x)) if c]

    def __call__(self, x: Element):
        return self.value(x)


def free_group(space: FiniteMetricSpace, N: int, r=INF, max_order: int = DEFAULT_MAX_ORDER) -> FreeValuedGroup:
    """Materialize ``Z_N[X]`` with ``p_d`` (capped at ``r``) and check that
    ``p_d >= mu(supp)`` and that ``x -> x^ - a^`` is isometric."""
    if N < 2:
        raise PreconditionError("N must be at least 2")
    n = len(space)
    if N ** (n - 1) > max_order:
        raise BudgetError(f"|Z_{N}[X]| = {N}^{n - 1} exceeds the bound {max_order}")
    G = FiniteAbelianGroup([N] * (n - 1), max_order=max_order)
    shell = FreeValuedGroup(space, N, ValuedGroup(G, (Fraction(0),) * G.order))
    costs = {}
    for (i, a), (j, b) in itertools.permutations(enumerate(space.points), 2):
        x = shell.hat_diff(a, b)
        v = space.d[i][j]
        if x not in costs or v < costs[x]:
            costs[x] = v
    table = complete_cost(CostFunction.from_mapping(G, costs)).table
    r = as_rational(r)
    if r != INF:
        table = tuple(min(t, r) for t in table)
    fvg = FreeValuedGroup(space, N, validate_value(G, table, r, N))
    for x, v in zip(G.elements, fvg.value.table):
        if x != G.zero and v < min(mu(space, fvg.support(x)), r):
            raise PostconditionError("value below the support bound", x)
    for a in space.points:
        for b in space.points:
            want = min(space.dist(a, b), r)
            if fvg(fvg.hat_diff(a, b)) != want:
                raise PostconditionError("point embedding is not isometric", (a, b))
    return fvg


def min_matching(space: FiniteMetricSpace, labels: Sequence) -> Fraction:
    """Least total distance of a perfect matching of ``labels``."""
    ids = [space.index(a) for a in labels]
    if len(ids) % 2:
        raise PostconditionError("odd support cannot be perfectly matched", tuple(labels))

    def go(rest: tuple) -> Fraction:
        if not rest:
            return Fraction(0)
        i, tail = rest[0], rest[1:]
        return min(space.d[i][j] + go(tail[:k] + tail[k + 1 :]) for k, j in enumerate(tail))

    return go(tuple(ids))


def pd_matching(fvg: FreeValuedGroup, x: Element) -> Fraction:
    """``p_d(x)`` for ``N = 2`` as a minimum-weight perfect matching of the support."""
    if fvg.N != 2:
        raise PreconditionError("the matching formula needs N = 2")
    if x == fvg.carrier.zero:
        raise PreconditionError("the matching formula is for nonzero elements")
    return min_matching(fvg.space, fvg.support(x))


def lipschitz_constant(space: FiniteMetricSpace, u: Mapping, target: ValuedGroup) -> Fraction:
    H = target.group
    best = Fraction(0)
    for a, b in itertools.combinations(space.points, 2):
        best = max(best, target(H.sub(u[a], u[b])) / space.dist(a, b))
    return best


def induced_hom(u: Mapping, fvg: FreeValuedGroup, target: ValuedGroup) -> GroupHom:
    """The homomorphism ``Z_N[X] -> H`` with ``x^ - y^ -> u(x) - u(y)``.

    Also checks that it is Lipschitz with the constant of ``u``.
    """
    H = target.group
    N = fvg.N
    if not H.has_exponent(N):
        raise PreconditionError(f"target is not of exponent {N}")
    u = {a: H.check(tuple(u[a])) for a in fvg.space.points}
    G = fvg.carrier
    mapping = {}
    for x in G.elements:
        acc = H.zero
        for a, c in zip(fvg.space.points, fvg.full(x)):
            if c:
                acc = H.add(acc, H.mul(c, u[a]))
        mapping[x] = acc
    hom = GroupHom(G, H, mapping)
    C = lipschitz_constant(fvg.space, u, target)
    for x in G.elements:
        if target(mapping[x]) > C * fvg(x):
            raise PostconditionError("induced map breaks the Lipschitz bound", x)
    return hom


def free_inclusion(small: FreeValuedGroup, big: FreeValuedGroup) -> GroupHom:
    """``Z_N[A] -> Z_N[X]`` induced by the inclusion of a subspace ``A``."""
    base = big.space.points[0]
    u = {a: big.hat_diff(a, base) for a in small.space.points}
    return induced_hom(u, small, big.value)


# -- word metrics ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneratingSet:
    group: FiniteAbelianGroup
    gens: tuple
    weights: tuple | None = None

    def __post_init__(self):
        G = self.group
        gens = tuple(sorted({G.check(tuple(g)) for g in self.gens}))
        if self.weights is not None:
            wmap = {G.check(tuple(g)): as_rational(w) for g, w in zip(self.gens, self.weights)}
            weights = tuple(wmap[g] for g in gens)
            if any(w <= 0 for w in weights):
                raise PreconditionError("generator weights must be positive")
        else:
            weights = None
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "weights", weights)
        if G.zero in gens:
            raise PreconditionError("generating set must not contain 0")
        gset = set(gens)
        for g in gens:
            if G.neg(g) not in gset:
                raise PreconditionError("generating set is not symmetric", g)
            if weights is not None and self.weight(G.neg(g)) != self.weight(g):
                raise PreconditionError("weights are not symmetric", g)

    def weight(self, g) -> Fraction:
        if self.weights is None:
            return Fraction(1)
        return self.weights[self.gens.index(g)]

    def generates(self) -> bool:
        return subgroup_generated(self.group, self.gens).order == self.group.order


def standard_generators(N: int, k: int | None = None) -> GeneratingSet:
    """``{+-e_j} u {e_j - e_k}`` in ``Z_N^k`` (``k`` defaults to ``N``)."""
    k = N if k is None else k
    G = FiniteAbelianGroup([N] * k)
    e = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
    gens = set()
    for j in range(k):
        gens.add(e[j])
        gens.add(G.neg(e[j]))
        for l in range(k):
            if l != j:
                gens.add(G.sub(e[j], e[l]))
    gens.discard(G.zero)
    return GeneratingSet(G, tuple(gens))


def word_metric(F: GeneratingSet, alpha=1) -> ValuedGroup:
    """``alpha * ||.||_F``: least (weighted) number of generators summing to x."""
    G = F.group
    alpha = as_rational(alpha)
    if alpha <= 0:
        raise PreconditionError("scale must be positive")
    if F.weights is None:
        dist = [None] * G.order
        dist[0] = 0
        steps = [G.translate_indices(g).tolist() for g in F.gens]
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for nbr in steps:
                v = nbr[u]
                if dist[v] is None:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        table = [INF if v is None else Fraction(v) for v in dist]
    else:
        costs = {g: F.weight(g) for g in F.gens}
        table = list(complete_cost(CostFunction.from_mapping(G, costs)).table)
    missing = [x for x, v in zip(G.elements, table) if v == INF]
    if missing:
        raise PreconditionError("generating set does not generate the group", missing[0])
    N = G.exponent if G.exponent > 1 else 0
    return validate_value(G, [alpha * v for v in table], INF, N)


__all__ = [
    "FiniteMetricSpace",
    "FreeValuedGroup",
    "GeneratingSet",
    "free_group",
    "free_inclusion",
    "induced_hom",
    "lipschitz_constant",
    "min_matching",
    "mu",
    "pd_matching",
    "standard_generators",
    "word_metric",
]
