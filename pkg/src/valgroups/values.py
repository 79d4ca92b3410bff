"""Exact value and semivalue tables on finite Abelian groups.

A table is a tuple of :class:`~fractions.Fraction` indexed like
``group.elements``.  Semivalue tables produced by :func:`complete_cost` may
hold ``INF`` at elements unreachable from the support of the cost.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .errors import AxiomViolation, PreconditionError
from .groups import Element, FiniteAbelianGroup, GroupHom, Subgroup
from .rational import INF, as_rational, common_denominator

ONE = Fraction(1)


def _normalize_cap(cap):
    cap = as_rational(cap) if cap is not None else INF
    if cap != INF and cap != 1:
        raise ValueError(f"class cap must be 1 or inf, got {cap}")
    return cap


@dataclass(frozen=True, eq=False)
class Semivalue:
    group: FiniteAbelianGroup
    table: tuple

    def __post_init__(self):
        if len(self.table) != self.group.order:
            raise ValueError(
                f"table has {len(self.table)} entries for a group of order {self.group.order}"
            )

    def __call__(self, x: Element):
        return self.table[self.group.index(x)]

    def __eq__(self, other):
        return (
            isinstance(other, Semivalue)
            and self.group == other.group
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.group, self.table))

    def as_dict(self) -> dict:
        return dict(zip(self.group.elements, self.table))

    def zeros(self) -> list:
        return [x for x, v in zip(self.group.elements, self.table) if v == 0]

    def unreachable(self) -> list:
        return [x for x, v in zip(self.group.elements, self.table) if v == INF]

    def is_value(self) -> bool:
        return len(self.zeros()) == 1 and not self.unreachable()

    def sup(self):
        return max(self.table)

    def to_value(self, cap=INF, exponent: int | None = None) -> ValuedGroup:
        return validate_value(self.group, self.table, cap, exponent)


@dataclass(frozen=True, eq=False)
class ValuedGroup(Semivalue):
    """A group with a value (V1)-(V3), a class cap ``r`` and exponent class ``N``.

    Construction does not re-run the O(|G|^2) axiom check; use
    :func:`validate_value` for untrusted tables.
    """

    cap: object = INF
    exponent: int = 0

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "cap", _normalize_cap(self.cap))

    def __eq__(self, other):
        return (
            isinstance(other, ValuedGroup)
            and super().__eq__(other)
            and self.cap == other.cap
            and self.exponent == other.exponent
        )

    def __hash__(self):
        return hash((self.group, self.table, self.cap, self.exponent))

    def __repr__(self):
        return (
            f"ValuedGroup({self.group!r}, cap={self.cap}, N={self.exponent}, "
            f"values={[str(v) for v in self.table]})"
        )

    def diameter(self):
        return max(self.table)

    def restrict(self, K: Subgroup) -> ValuedGroup:
        """The subgroup ``K`` re-expressed in canonical coordinates."""
        C, emb = K.canonical()
        table = tuple(self(emb(x)) for x in C.elements)
        return ValuedGroup(C, table, self.cap, self.exponent)


@dataclass(frozen=True, eq=False)
class CostFunction:
    """Symmetric nonnegative costs with ``cost(0) = 0``; ``INF`` allowed."""

    group: FiniteAbelianGroup
    table: tuple

    def __post_init__(self):
        G = self.group
        table = tuple(as_rational(v) for v in self.table)
        if len(table) != G.order:
            raise ValueError("cost table is not total")
        if table[0] != 0:
            raise AxiomViolation("cost(0)=0", G.zero)
        for i, x in enumerate(G.elements):
            if table[i] < 0:
                raise AxiomViolation("nonnegative", x)
            if table[G.index(G.neg(x))] != table[i]:
                raise AxiomViolation("V2", (x, G.neg(x)))
        object.__setattr__(self, "table", table)

    @classmethod
    def from_mapping(cls, G: FiniteAbelianGroup, costs: Mapping, default=INF) -> CostFunction:
        """Sparse constructor: unspecified elements get ``default``; the
        zero element always costs 0 and ``costs[x]`` is mirrored to ``-x``."""
        table = [default] * G.order
        for x, c in costs.items():
            c = as_rational(c)
            for y in (x, G.neg(x)):
                i = G.index(y)
                table[i] = c if table[i] == default else min(table[i], c)
        table[0] = Fraction(0)
        return cls(G, tuple(table))

    def __call__(self, x):
        return self.table[self.group.index(x)]


# -- validation --------------------------------------------------------------


def _scaled(table) -> np.ndarray:
    """Integer (or exact object) array proportional to ``table``."""
    den = common_denominator(table)
    ints = [int(v * den) for v in table]
    if max(ints, default=0) < 2**60 // 4:
        return np.array(ints, dtype=np.int64)
    return np.array(ints, dtype=object)


def subadditivity_witness(G: FiniteAbelianGroup, table, block: int = 256):
    """First ``(x, y)`` (lexicographic) with ``t(x+y) > t(x) + t(y)``, or None."""
    if any(v == INF for v in table):
        finite = [i for i, v in enumerate(table) if v != INF]
        for i in finite:
            for j in finite:
                k = G.index(G.add(G.elements[i], G.elements[j]))
                if table[k] > table[i] + table[j]:
                    return G.elements[i], G.elements[j]
        return None
    t = _scaled(table)
    for start in range(0, G.order, block):
        rows = slice(start, min(start + block, G.order))
        s = G.sum_indices(rows)
        bad = t[s] > t[rows, None] + t[None, :]
        if bad.any():
            a, j = np.argwhere(bad)[0]
            return G.elements[start + int(a)], G.elements[int(j)]
    return None


def validate_semivalue(G: FiniteAbelianGroup, table) -> Semivalue:
    table = tuple(as_rational(v) for v in table)
    if len(table) != G.order:
        raise ValueError("value table is not total")
    if table[0] != 0:
        raise AxiomViolation("semivalue p(0)=0", G.zero)
    neg = G.neg_indices
    for i, x in enumerate(G.elements):
        if table[i] < 0:
            raise AxiomViolation("nonnegative", x)
        if table[int(neg[i])] != table[i]:
            raise AxiomViolation("V2", (x, G.neg(x)))
    w = subadditivity_witness(G, table)
    if w is not None:
        raise AxiomViolation("V3", w)
    return Semivalue(G, table)


def validate_value(G: FiniteAbelianGroup, table, cap=INF, N: int | None = None) -> ValuedGroup:
    """Return a :class:`ValuedGroup` iff (V1)-(V3), the cap and the exponent
    class all hold; otherwise raise :class:`AxiomViolation` with a witness.

    ``N=None`` takes the exponent of ``G`` itself.
    """
    if isinstance(table, Mapping):
        table = tuple(table[x] for x in G.elements)
    table = tuple(as_rational(v) for v in table)
    if len(table) != G.order:
        raise ValueError("value table is not total")
    cap = _normalize_cap(cap)
    if N is None:
        N = G.exponent if G.exponent > 1 else 0
    if N == 1 or N < 0:
        raise ValueError("exponent class must be 0 or >= 2")
    for i, x in enumerate(G.elements):
        if (table[i] == 0) != (i == 0):
            raise AxiomViolation("V1", x)
        if table[i] == INF:
            raise AxiomViolation("finite", x)
    sv = validate_semivalue(G, table)
    if cap == 1:
        for x, v in zip(G.elements, table):
            if v > 1:
                raise AxiomViolation("cap", x, f"value {v} at {x} exceeds cap 1")
    if not G.has_exponent(N):
        bad = next(x for x in G.elements if G.mul(N, x) != G.zero)
        raise AxiomViolation("exponent", bad, f"{N}*{bad} != 0")
    return ValuedGroup(G, sv.table, cap, N)


# -- constructions -----------------------------------------------------------


def complete_cost(c: CostFunction) -> Semivalue:
    """Largest semivalue dominated by ``c``.

    ``result(x) = min { sum c(h_j) : x = sum h_j }``, computed as a
    single-source shortest path from 0 in the Cayley graph whose edges are
    the finitely-priced elements.  Unreachable elements get ``INF``.
    """
    G = c.group
    atoms = [(i, v) for i, v in enumerate(c.table) if i != 0 and v != INF]
    den = common_denominator(v for _, v in atoms)
    steps = [(G.translate_indices(G.elements[i]).tolist(), int(v * den)) for i, v in atoms]
    dist = [None] * G.order
    dist[0] = 0
    heap = [(0, 0)]  # (distance, index); index order is lexicographic
    done = [False] * G.order
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for nbr, w in steps:
            v = nbr[u]
            nd = d + w
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    table = tuple(INF if d is None else Fraction(d, den) for d in dist)
    return Semivalue(G, table)


def push_value(s: Semivalue, pi: GroupHom) -> Semivalue:
    """Induced semivalue on the codomain: ``q(y) = min { s(x) : pi(x) = y }``."""
    Q = pi.target
    if not pi.is_surjective():
        raise PreconditionError("projection is not surjective")
    best: dict = {}
    for x, v in zip(s.group.elements, s.table):
        y = pi(x)
        if y not in best or v < best[y]:
            best[y] = v
    return Semivalue(Q, tuple(best[y] for y in Q.elements))


def cap_value(v: Semivalue, r) -> Semivalue:
    """Pointwise ``v ^ r``; ``r`` is 1, ``INF`` or any positive rational."""
    r = as_rational(r)
    if r == INF:
        return v
    if r <= 0:
        raise ValueError("cap must be positive")
    table = tuple(min(t, r) for t in v.table)
    if isinstance(v, ValuedGroup):
        cap = 1 if r <= 1 else v.cap
        return ValuedGroup(v.group, table, cap, v.exponent)
    return Semivalue(v.group, table)


def compose_modulus(omega: Callable, v: Semivalue) -> Semivalue:
    """``omega o v`` as a semivalue table (``omega`` any callable on rationals)."""
    return Semivalue(v.group, tuple(Fraction(omega(t)) if t != INF else INF for t in v.table))


def is_isometric(phi: GroupHom, p_source: Callable, p_target: Callable):
    """First element where ``p_target(phi(x)) != p_source(x)``, or None."""
    for x, y in phi.mapping.items():
        if p_target(y) != p_source(x):
            return x
    return None


def isometric_isomorphic(A: ValuedGroup, B: ValuedGroup) -> GroupHom | None:
    """An isometric isomorphism ``A -> B`` or None.

    Backtracks over images of the cyclic generators of ``A``; candidates must
    match the generator's order and value, and each partial assignment is
    checked on the subgroup it determines.
    """
    GA, GB = A.group, B.group
    if GA.order != GB.order or sorted(A.table) != sorted(B.table):
        return None
    if GA.invariant_factors() != GB.invariant_factors():
        return None
    phi = find_isometric_hom(A, B)
    if phi is None or not phi.is_injective():
        return None
    return phi


def find_isometric_hom(
    H: ValuedGroup,
    G: Semivalue,
    fixed: Mapping | None = None,
    injective: bool = False,
) -> GroupHom | None:
    """Search an isometric homomorphism ``H -> G`` agreeing with ``fixed``.

    ``fixed`` is a partial map (e.g. an isometric map on a subgroup) that the
    result must extend.  Generators of ``H`` are assigned in order; after
    fixing generator i every element supported on the first i coordinates is
    checked against ``fixed`` and for isometry.
    """
    HG, GG = H.group, G.group
    fixed = dict(fixed or {})
    k = HG.rank
    units = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
    # elements whose last nonzero coordinate is i are first determined at level i
    levels: list[list] = [[] for _ in range(k)]
    for x in HG.elements:
        nz = [i for i, c in enumerate(x) if c]
        if nz:
            levels[nz[-1]].append(x)
    by_value: dict = {}
    for g, v in zip(GG.elements, G.table):
        by_value.setdefault(v, []).append(g)
    candidates = []
    for i, n in enumerate(HG.factors):
        u = units[i]
        if u in fixed:
            cands = [fixed[u]]
        else:
            cands = by_value.get(H(u), [])
        cands = [g for g in cands if GG.mul(n, g) == GG.zero]
        candidates.append(cands)
    images: list = [None] * k

    def image_of(x):
        acc = GG.zero
        for c, h in zip(x, images):
            if c:
                acc = GG.add(acc, GG.mul(c, h))
        return acc

    def consistent(level):
        seen = set()
        for x in levels[level]:
            y = image_of(x)
            if G(y) != H(x):
                return False
            if x in fixed and fixed[x] != y:
                return False
            if injective:
                seen.add(y)
        return True

    def search(i):
        if i == k:
            return True
        for g in candidates[i]:
            images[i] = g
            if consistent(i) and search(i + 1):
                return True
        images[i] = None
        return False

    if fixed.get(HG.zero, GG.zero) != GG.zero:
        return None
    if not search(0):
        return None
    mapping = {x: image_of(x) for x in HG.elements}
    if injective and len(set(mapping.values())) != len(mapping):
        return None
    return GroupHom(HG, GG, mapping)


def canonical_table(v: ValuedGroup, autos=None) -> tuple:
    """Lexicographically least table over automorphisms of ``v.group``."""
    from .groups import automorphisms

    G = v.group
    autos = automorphisms(G) if autos is None else autos
    best = None
    for a in autos:
        t = tuple(v(a(x)) for x in G.elements)
        if best is None or t < best:
            best = t
    return best


def direct_sum(A: ValuedGroup, B: ValuedGroup, cap=None) -> ValuedGroup:
    """``A x B`` with value ``p(a) + q(b)``, capped at ``cap`` (default A's cap)."""
    G = A.group.direct_product(B.group)
    cap = A.cap if cap is None else _normalize_cap(cap)
    table = []
    for x in G.elements:
        s = A(x[: A.group.rank]) + B(x[A.group.rank :])
        table.append(min(s, cap) if cap != INF else s)
    N = math.lcm(A.exponent, B.exponent) if A.exponent and B.exponent else 0
    return ValuedGroup(G, tuple(table), cap, N)


def discrete_value(G: FiniteAbelianGroup, scale=ONE) -> ValuedGroup:
    """``scale * delta_G``: every nonzero element has value ``scale``."""
    scale = Fraction(scale)
    table = tuple(Fraction(0) if i == 0 else scale for i in range(G.order))
    return ValuedGroup(G, table, 1 if scale <= 1 else INF, G.exponent if G.exponent > 1 else 0)


def with_class(v: Semivalue, cap=INF, exponent: int | None = None) -> ValuedGroup:
    N = (v.group.exponent if v.group.exponent > 1 else 0) if exponent is None else exponent
    return ValuedGroup(v.group, v.table, cap, N)


__all__ = [
    "CostFunction",
    "Semivalue",
    "ValuedGroup",
    "cap_value",
    "canonical_table",
    "complete_cost",
    "compose_modulus",
    "direct_sum",
    "discrete_value",
    "find_isometric_hom",
    "is_isometric",
    "isometric_isomorphic",
    "push_value",
    "subadditivity_witness",
    "validate_semivalue",
    "validate_value",
    "with_class",
]
