"""Finite Abelian groups as products of cyclic factors.

Elements are residue tuples ``(x_1, ..., x_k)`` with ``0 <= x_i < n_i``.
Element order, and every table indexed by elements, is lexicographic on
coordinates; :meth:`FiniteAbelianGroup.index` is the mixed-radix position.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetError, InvalidSubgroupError, MalformedElementError

Element = tuple  # tuple[int, ...]

DEFAULT_MAX_ORDER = 10**6
DEFAULT_HOM_LIMIT = 10**6


class FiniteAbelianGroup:
    """``Z_{n_1} x ... x Z_{n_k}``; immutable, hashable by its factor list."""

    __slots__ = ("factors", "order", "__dict__")

    def __init__(self, factors: Iterable[int], max_order: int = DEFAULT_MAX_ORDER):
        factors = tuple(int(n) for n in factors)
        if any(n < 1 for n in factors):
            raise ValueError(f"cyclic factors must be >= 1, got {factors}")
        order = math.prod(factors)
        if order > max_order:
            raise BudgetError(f"group order {order} exceeds bound {max_order}")
        self.factors = factors
        self.order = order

    @classmethod
    def cyclic(cls, n: int) -> FiniteAbelianGroup:
        return cls((n,))

    @classmethod
    def trivial(cls) -> FiniteAbelianGroup:
        return cls(())

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(("FiniteAbelianGroup", self.factors))

    def __repr__(self):
        if not self.factors:
            return "FiniteAbelianGroup(())"
        return "FiniteAbelianGroup(" + " x ".join(f"Z{n}" for n in self.factors) + ")"

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(isinstance(c, int) and 0 <= c < n for c, n in zip(x, self.factors))
        )

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def ambient(self) -> FiniteAbelianGroup:
        return self

    @cached_property
    def zero(self) -> Element:
        return (0,) * len(self.factors)

    @cached_property
    def elements(self) -> tuple:
        return tuple(itertools.product(*(range(n) for n in self.factors)))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.factors) if self.factors else 1

    @cached_property
    def _weights(self) -> tuple:
        w, acc = [], 1
        for n in reversed(self.factors):
            w.append(acc)
            acc *= n
        return tuple(reversed(w))

    def check(self, x) -> Element:
        if x not in self:
            raise MalformedElementError(f"{x!r} is not an element of {self!r}")
        return x

    def element_from(self, coords: Sequence[int]) -> Element:
        """Reduce arbitrary integer coordinates into canonical residues."""
        if len(coords) != len(self.factors):
            raise MalformedElementError(
                f"expected {len(self.factors)} coordinates, got {len(coords)}"
            )
        return tuple(int(c) % n for c, n in zip(coords, self.factors))

    def index(self, x: Element) -> int:
        return sum(c * w for c, w in zip(x, self._weights))

    def element(self, i: int) -> Element:
        return self.elements[i]

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.factors))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.factors))

    def mul(self, k: int, x: Element) -> Element:
        return tuple((k * a) % n for a, n in zip(x, self.factors))

    def sum(self, xs: Iterable[Element]) -> Element:
        acc = [0] * len(self.factors)
        for x in xs:
            for i, c in enumerate(x):
                acc[i] += c
        return tuple(a % n for a, n in zip(acc, self.factors))

    def element_order(self, x: Element) -> int:
        return math.lcm(*(n // math.gcd(c, n) for c, n in zip(x, self.factors))) if x else 1

    def has_exponent(self, N: int) -> bool:
        """True iff ``N * x = 0`` for all x; ``N = 0`` imposes nothing."""
        return N == 0 or N % self.exponent == 0

    def direct_product(self, other: FiniteAbelianGroup) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.factors + other.factors)

    def invariant_factors(self) -> tuple:
        """Canonical ``d_1 | d_2 | ...`` (all > 1) of the isomorphism type."""
        diag = [[n if i == j else 0 for j in range(self.rank)] for i, n in enumerate(self.factors)]
        return canonical_presentation(diag, self.rank)[0]

    # -- vectorized index arithmetic ----------------------------------------

    @cached_property
    def coords(self) -> np.ndarray:
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        return np.array(self.elements, dtype=np.int64).reshape(self.order, self.rank)

    def _index_of_coords(self, coords: np.ndarray) -> np.ndarray:
        mods = np.array(self.factors, dtype=np.int64)
        w = np.array(self._weights, dtype=np.int64)
        return (coords % mods) @ w if self.factors else np.zeros(coords.shape[0], dtype=np.int64)

    def translate_indices(self, h: Element) -> np.ndarray:
        """``out[i] = index(elements[i] + h)``."""
        return self._index_of_coords(self.coords + np.array(h, dtype=np.int64))

    @cached_property
    def neg_indices(self) -> np.ndarray:
        return self._index_of_coords(-self.coords)

    def sum_indices(self, rows: slice) -> np.ndarray:
        """Block of the addition table: ``out[a, j] = index(x_a + x_j)``."""
        block = self.coords[rows]
        out = np.zeros((block.shape[0], self.order), dtype=np.int64)
        for i, (n, w) in enumerate(zip(self.factors, self._weights)):
            out += ((block[:, i : i + 1] + self.coords[None, :, i]) % n) * w
        return out


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup given by its (sorted) elements and a generating list."""

    parent: FiniteAbelianGroup
    elements: tuple
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.elements))

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self._members == other._members
        )

    def __hash__(self):
        return hash((self.parent, self._members))

    def __contains__(self, x) -> bool:
        return x in self._members

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order}, of={self.parent!r})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def ambient(self) -> FiniteAbelianGroup:
        return self.parent

    @property
    def zero(self) -> Element:
        return self.parent.zero

    def add(self, x, y):
        return self.parent.add(x, y)

    def neg(self, x):
        return self.parent.neg(x)

    def sub(self, x, y):
        return self.parent.sub(x, y)

    def check(self, x):
        if x not in self._members:
            raise MalformedElementError(f"{x!r} is not in the subgroup")
        return x

    def is_trivial(self) -> bool:
        return self.order == 1

    def canonical(self) -> tuple[FiniteAbelianGroup, GroupHom]:
        """Return ``(C, e)``: ``C`` in invariant-factor form and ``e: C -> parent``
        an injective homomorphism with image exactly this subgroup."""
        G = self.parent
        gens = [g for g in self.generators if g != G.zero]
        if not gens:
            C = FiniteAbelianGroup(())
            return C, GroupHom(C, G, {C.zero: G.zero})
        s, k = len(gens), G.rank
        # kernel of Z^s -> G, computed as the kernel of [A | diag(n)] projected to Z^s
        B = [[gens[j][i] for j in range(s)] + [G.factors[i] if c == i else 0 for c in range(k)]
             for i in range(k)]
        _, D, V, _ = smith_normal_form(B)
        rank = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)
        lattice = [[V[row][col] for col in range(rank, s + k)] for row in range(s)]
        factors, project, lift = canonical_presentation(lattice, s, with_lift=True)
        C = FiniteAbelianGroup(factors)
        images = []
        for i in range(C.rank):
            vec = lift(i)
            images.append(G.sum(G.mul(c, g) for c, g in zip(vec, gens)))
        emb = GroupHom.from_images(C, G, images)
        if set(emb.mapping.values()) != self._members:
            raise InvalidSubgroupError("canonical form does not reproduce the subgroup")
        return C, emb


def subgroup_generated(G: FiniteAbelianGroup, gens: Iterable[Element]) -> Subgroup:
    """Smallest subgroup containing ``gens`` (closure under addition)."""
    gens = tuple(G.check(tuple(g)) for g in gens)
    members = {G.zero}
    frontier = [G.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(members)), gens)


def subgroup_from_elements(G: FiniteAbelianGroup, elements: Iterable[Element]) -> Subgroup:
    """Wrap an explicit element set, checking that it is a subgroup."""
    elems = {G.check(tuple(x)) for x in elements}
    if G.zero not in elems:
        raise InvalidSubgroupError("subset does not contain zero")
    for x in elems:
        if G.neg(x) not in elems:
            raise InvalidSubgroupError(f"not closed under negation at {x}")
        for y in elems:
            if G.add(x, y) not in elems:
                raise InvalidSubgroupError(f"not closed under addition at {x} + {y}")
    ordered = tuple(sorted(elems))
    return Subgroup(G, ordered, ordered)


def all_subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, deduplicated; intended for desk-scale groups."""
    found: dict[frozenset, Subgroup] = {}
    frontier = [subgroup_generated(G, [])]
    found[frozenset(frontier[0].elements)] = frontier[0]
    while frontier:
        nxt = []
        for K in frontier:
            for x in G.elements:
                if x in K:
                    continue
                S = subgroup_generated(G, K.generators + (x,))
                key = frozenset(S.elements)
                if key not in found:
                    found[key] = S
                    nxt.append(S)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.elements))


# -- homomorphisms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism stored as a total table ``source element -> target element``.

    ``source`` and ``target`` may each be a group or a :class:`Subgroup`.
    """

    source: object
    target: object
    mapping: dict

    def __call__(self, x: Element) -> Element:
        return self.mapping[x]

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.mapping.items()))))

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r})"

    @classmethod
    def from_images(cls, source: FiniteAbelianGroup, target, images: Sequence[Element]) -> GroupHom:
        """Homomorphism sending the i-th unit vector of ``source`` to ``images[i]``."""
        T = target.ambient
        images = [T.check(tuple(h)) for h in images]
        if len(images) != source.rank:
            raise MalformedElementError(
                f"need {source.rank} generator images, got {len(images)}"
            )
        for n, h in zip(source.factors, images):
            if T.mul(n, h) != T.zero:
                raise MalformedElementError(
                    f"image {h} has order {T.element_order(h)} not dividing {n}"
                )
        mapping = {x: T.sum(T.mul(c, h) for c, h in zip(x, images)) for x in source.elements}
        return cls(source, target, mapping)

    @classmethod
    def from_function(cls, source, target, fn: Callable[[Element], Element]) -> GroupHom:
        return cls(source, target, {x: fn(x) for x in source.elements})

    @classmethod
    def identity(cls, G) -> GroupHom:
        return cls(G, G, {x: x for x in G.elements})

    @classmethod
    def inclusion(cls, K: Subgroup) -> GroupHom:
        return cls(K, K.parent, {x: x for x in K.elements})

    def generator_images(self) -> list:
        S = self.source
        if not isinstance(S, FiniteAbelianGroup):
            raise TypeError("generator images need a cyclic-factor source")
        units = [tuple(1 if j == i else 0 for j in range(S.rank)) for i in range(S.rank)]
        return [self.mapping[u] for u in units]

    def compose(self, inner: GroupHom) -> GroupHom:
        """``self o inner``."""
        return GroupHom(inner.source, self.target,
                        {x: self.mapping[y] for x, y in inner.mapping.items()})

    def restrict(self, K) -> GroupHom:
        return GroupHom(K, self.target, {x: self.mapping[x] for x in K.elements})

    def additivity_witness(self):
        """First pair ``(x, y)`` with ``f(x+y) != f(x)+f(y)``, or None."""
        S, T = self.source, self.target.ambient
        if self.mapping.get(S.zero) != T.zero:
            return (S.zero, S.zero)
        for x in S.elements:
            fx = self.mapping[x]
            for y in S.elements:
                if self.mapping[S.add(x, y)] != T.add(fx, self.mapping[y]):
                    return (x, y)
        return None

    def is_additive(self) -> bool:
        return self.additivity_witness() is None

    def kernel(self) -> Subgroup:
        T = self.target.ambient
        elems = tuple(sorted(x for x, y in self.mapping.items() if y == T.zero))
        return Subgroup(self.source.ambient, elems, elems)

    def image(self) -> Subgroup:
        elems = tuple(sorted(set(self.mapping.values())))
        return Subgroup(self.target.ambient, elems, elems)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) >= set(self.target.elements)


def enumerate_homs(H: FiniteAbelianGroup, G, limit: int = DEFAULT_HOM_LIMIT) -> Iterator[GroupHom]:
    """Yield every homomorphism ``H -> G`` once, lexicographically by
    generator images."""
    T = G.ambient
    candidates = [[g for g in G.elements if T.mul(n, g) == T.zero] for n in H.factors]
    total = math.prod(len(c) for c in candidates)
    if total > limit:
        raise BudgetError(f"{total} homomorphisms exceed the bound {limit}", partial=total)
    for images in itertools.product(*candidates):
        yield GroupHom.from_images(H, G, images)


def count_homs(H: FiniteAbelianGroup, G) -> int:
    T = G.ambient
    return math.prod(
        sum(1 for g in G.elements if T.mul(n, g) == T.zero) for n in H.factors
    )


def automorphisms(G: FiniteAbelianGroup, limit: int = DEFAULT_HOM_LIMIT) -> list[GroupHom]:
    return [h for h in enumerate_homs(G, G, limit) if h.is_injective()]


def quotient(G: FiniteAbelianGroup, K: Subgroup) -> tuple[FiniteAbelianGroup, GroupHom]:
    """``G/K`` in invariant-factor form together with the projection."""
    if K.parent != G:
        raise InvalidSubgroupError("subgroup belongs to a different group")
    members = set(K.elements)
    for x in K.generators:
        if x not in members:
            raise InvalidSubgroupError(f"generator {x} missing from the subgroup")
    for g in K.generators:
        for x in K.elements:
            if G.add(x, g) not in members:
                raise InvalidSubgroupError(f"subgroup not closed at {x} + {g}")
    k = G.rank
    relations = [[G.factors[i] if c == i else 0 for c in range(k)] + [g[i] for g in K.generators]
                 for i in range(k)]
    factors, project, _ = canonical_presentation(relations, k)
    Q = FiniteAbelianGroup(factors)
    pi = GroupHom(G, Q, {x: project(x) for x in G.elements})
    return Q, pi


# -- integer linear algebra --------------------------------------------------


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Return ``(U, D, V, U_inv)`` with ``U A V = D`` diagonal, ``d_i | d_{i+1}``,
    ``U``, ``V`` unimodular and ``U_inv = U^{-1}``."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_addmul(i, t, q):  # row_i -= q * row_t
        D[i] = [a - q * b for a, b in zip(D[i], D[t])]
        U[i] = [a - q * b for a, b in zip(U[i], U[t])]
        for r in range(m):
            Ui[r][t] += q * Ui[r][i]

    def col_addmul(j, t, q):  # col_j -= q * col_t
        for r in range(m):
            D[r][j] -= q * D[r][t]
        for r in range(n):
            V[r][j] -= q * V[r][t]

    def swap_rows(i, t):
        D[i], D[t] = D[t], D[i]
        U[i], U[t] = U[t], U[i]
        for r in range(m):
            Ui[r][i], Ui[r][t] = Ui[r][t], Ui[r][i]

    def swap_cols(j, t):
        for r in range(m):
            D[r][j], D[r][t] = D[r][t], D[r][j]
        for r in range(n):
            V[r][j], V[r][t] = V[r][t], V[r][j]

    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(i, t)
        swap_cols(j, t)
        while True:
            for i in range(t + 1, m):
                if D[i][t]:
                    row_addmul(i, t, D[i][t] // D[t][t])
            for j in range(t + 1, n):
                if D[t][j]:
                    col_addmul(j, t, D[t][j] // D[t][t])
            rest = [(abs(D[i][t]), i, "r") for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), j, "c") for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, idx, kind = min(rest)
                if kind == "r":
                    swap_rows(idx, t)
                else:
                    swap_cols(idx, t)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            # row_t += row_i, then the loop above restores the pivot
            row_addmul(t, bad[0], -1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
            for r in range(m):
                Ui[r][t] = -Ui[r][t]
    return U, D, V, Ui


def canonical_presentation(relations: Sequence[Sequence[int]], k: int, with_lift: bool = False):
    """Invariant-factor form of ``Z^k / colspan(relations)``.

    Returns ``(factors, project, lift)`` where ``project`` maps an integer
    vector to canonical coordinates and ``lift(i)`` returns an integer vector
    representing the i-th canonical generator (None unless ``with_lift``).
    """
    if k == 0:
        return (), (lambda x: ()), (lambda i: ())
    if not relations or not relations[0]:
        raise InvalidSubgroupError("presentation is infinite")
    U, D, _, Ui = smith_normal_form(relations)
    diag = [D[i][i] if i < len(D[0]) else 0 for i in range(k)]
    if any(d == 0 for d in diag):
        raise InvalidSubgroupError("presentation is infinite")
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = tuple(diag[i] for i in keep)
    rows = [U[i] for i in keep]

    def project(x):
        return tuple(sum(a * b for a, b in zip(row, x)) % d for row, d in zip(rows, factors))

    def lift(i):
        col = keep[i]
        return [Ui[r][col] for r in range(k)]

    return factors, project, (lift if with_lift else None)
