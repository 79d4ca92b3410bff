"""Katetov maps on finite valued groups and one-point extensions.

A Katetov map ``f`` on a subset ``A`` of a valued group prescribes the
distances of a new point to the points of ``A``.  :func:`extend_onegen`
adjoins a cyclic factor generated by such a point; :func:`check_trvN` tests
the exponent-``N`` obstruction that must hold first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import AdmissibilityError, AxiomViolation, PreconditionError, PostconditionError
from .groups import Element, FiniteAbelianGroup, GroupHom, Subgroup
from .piecewise import Modulus, ort_witness
from .rational import INF, as_rational, is_on_grid, round_up_to_grid
from .values import CostFunction, Semivalue, ValuedGroup, complete_cost, validate_value


@dataclass(frozen=True, eq=False)
class KatetovMap:
    base: ValuedGroup
    f: Mapping  # element -> Fraction
    cap: object = INF

    def __post_init__(self):
        G, p = self.base.group, self.base
        f = {G.check(tuple(a)): as_rational(v) for a, v in dict(self.f).items()}
        if not f:
            raise PreconditionError("Katetov domain must be nonempty")
        cap = as_rational(self.cap)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "cap", cap)
        for a, v in f.items():
            if v < 0 or v == INF:
                raise AxiomViolation("Katetov range", a, f"f({a}) = {v} is not a finite nonnegative number")
            if v > cap:
                raise AxiomViolation("cap", a, f"f({a}) = {v} exceeds cap {cap}")
        for x, y in itertools.combinations(sorted(f), 2):
            d = p(G.sub(x, y))
            if abs(f[x] - f[y]) > d or d > f[x] + f[y]:
                raise AxiomViolation("Katetov", (x, y))

    @property
    def domain(self) -> list:
        return sorted(self.f)

    def __call__(self, a):
        return self.f[a]

    def is_subgroup_domain(self) -> bool:
        G = self.base.group
        dom = set(self.f)
        return G.zero in dom and all(G.sub(x, y) in dom for x in dom for y in dom)

    @classmethod
    def realized_by(cls, G: ValuedGroup, b: Element, domain, cap=INF) -> KatetovMap:
        """The map ``a -> p(a - b)`` on ``domain``."""
        return cls(G, {a: G(G.group.sub(a, b)) for a in domain}, cap)


@dataclass(frozen=True)
class OneGenExtension:
    source: ValuedGroup
    result: ValuedGroup
    embedding: GroupHom
    witness: Element
    m: int
    M: Fraction
    c: Fraction


def check_trvN(f: KatetovMap, N: int):
    """Return ``(True, None)`` or ``(False, witness)`` for the exponent-N
    admissibility condition

        |p(a_1 + ... + a_N) - f(a_N)| <= f(a_1) + ... + f(a_{N-1})

    over all N-tuples from the domain.  The left side depends on
    ``a_1..a_{N-1}`` only through their sum, so those run over multisets.
    On a subgroup domain the equivalent form
    ``f(-(a_1 + ... + a_{N-1})) <= f(a_1) + ... + f(a_{N-1})`` is used.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    G, p = f.base.group, f.base
    dom = f.domain
    if f.is_subgroup_domain():
        for tup in itertools.combinations_with_replacement(dom, N - 1):
            s = G.sum(tup)
            if f(G.neg(s)) > sum(f(a) for a in tup):
                return False, tup
        return True, None
    for tup in itertools.combinations_with_replacement(dom, N - 1):
        s = G.sum(tup)
        budget = sum(f(a) for a in tup)
        for last in dom:
            if abs(p(G.add(s, last)) - f(last)) > budget:
                return False, tup + (last,)
    return True, None


def find_realizer(G: ValuedGroup, f: KatetovMap) -> Element | None:
    """Lexicographically first ``b`` with ``p(a - b) = f(a)`` on the domain."""
    grp = G.group
    for b in grp.elements:
        if all(G(grp.sub(a, b)) == v for a, v in f.f.items()):
            return b
    return None


def _class_of(G: ValuedGroup, N: int | None, r):
    N = G.exponent if N is None else N
    r = G.cap if r is None else as_rational(r)
    if N != 0 and not G.group.has_exponent(N):
        raise PreconditionError(f"group is not of exponent {N}")
    if r == 1 and max(G.table) > 1:
        raise PreconditionError("value exceeds cap 1")
    return N, r


def extend_onegen(G: ValuedGroup, f: KatetovMap, N: int | None = None, r=None) -> OneGenExtension:
    """Adjoin a point ``b`` with ``p(a - b) = f(a)`` for ``a`` in the domain.

    The new group is ``G x Z_m``; its value is the largest semivalue below
    the costs ``(g, 0) -> p(g)``, ``(a, -1), (-a, 1) -> f(a)`` and
    ``(0, h) -> M`` for ``h != 0``, capped at ``M`` in the bounded class.
    """
    N, r = _class_of(G, N, r)
    grp = G.group
    if f.base.group != grp:
        raise PreconditionError("Katetov map lives on a different group")
    if r == 1 and max(f.f.values()) > 1:
        raise PreconditionError("Katetov map exceeds cap 1")
    if N > 2:
        ok, wit = check_trvN(f, N)
        if not ok:
            raise AdmissibilityError(f"condition fails for N={N}", wit)
    c = min(f.f.values())
    if c == 0:
        raise PreconditionError(
            "min f = 0: the map is realized at distance zero; use find_realizer instead",
            [a for a, v in f.f.items() if v == 0],
        )
    M = max(max(G.table), max(f.f.values()))
    if N != 0:
        m = N
    else:
        m = max(2, math.ceil(M / c) + 1)
    Z = FiniteAbelianGroup([m])
    big = grp.direct_product(Z)
    k = grp.rank
    costs: dict = {}

    def put(x, v):
        if x not in costs or v < costs[x]:
            costs[x] = v

    for g, v in zip(grp.elements, G.table):
        put(g + (0,), v)
    for a, v in f.f.items():
        put(a + ((m - 1) % m,), v)
    for h in range(1, m):
        put(grp.zero + (h,), M)
    table = complete_cost(CostFunction.from_mapping(big, costs)).table
    if r == 1:
        table = tuple(min(t, M) for t in table)
    result = validate_value(big, table, r, N if N != 0 else 0)
    emb = GroupHom(grp, big, {g: g + (0,) for g in grp.elements})
    b = grp.zero + (1 % m,)
    for g in grp.elements:
        if result(g + (0,)) != G(g):
            raise PostconditionError("extension changed the value on the base group", g)
    for a, v in f.f.items():
        if result(big.sub(a + (0,), b)) != v:
            raise PostconditionError("adjoined point misses a prescribed distance", a)
    assert k == big.rank - 1
    return OneGenExtension(G, result, emb, b, m, M, c)


def midpoint_extend(G: ValuedGroup, x: Element, y: Element, N: int | None = None, r=None) -> OneGenExtension:
    """Adjoin ``z`` with ``p(x - z) = p(y - z) = p(x - y) / 2``."""
    x, y = G.group.check(x), G.group.check(y)
    if x == y:
        raise PreconditionError("midpoint of a point with itself", x)
    half = G(G.group.sub(x, y)) / 2
    f = KatetovMap(G, {x: half, y: half}, G.cap if r is None else r)
    return extend_onegen(G, f, N, r)


def extend_value_grid(D: ValuedGroup, D0: Subgroup, log2_denominator: int, eps, r=None) -> ValuedGroup:
    """A grid-valued value within ``eps`` of ``D`` that agrees with it on ``D0``.

    Off ``D0`` each value is bumped up to the next multiple of ``2^-m``; the
    result is the completion of the bumped table, capped at 1 in the bounded
    class.
    """
    eps = as_rational(eps)
    r = D.cap if r is None else as_rational(r)
    step = Fraction(1, 2**log2_denominator)
    if step > eps:
        raise PreconditionError(f"grid step {step} exceeds eps {eps}")
    grp = D.group
    members = set(D0.elements)
    for h in D0.elements:
        if not is_on_grid(D(h), log2_denominator):
            raise PreconditionError("value on the fixed subgroup is off the grid", h)
    if r == 1 and max(D.table) > 1:
        raise PreconditionError("value exceeds cap 1")
    bumped = []
    for x, v in zip(grp.elements, D.table):
        bumped.append(v if x in members else round_up_to_grid(v, log2_denominator))
    table = complete_cost(CostFunction(grp, tuple(bumped))).table
    if r == 1:
        table = tuple(min(t, 1) for t in table)
    out = validate_value(grp, table, r, D.exponent)
    for x, old, new in zip(grp.elements, D.table, out.table):
        if abs(old - new) > eps or not is_on_grid(new, log2_denominator):
            raise PostconditionError("grid extension out of tolerance", x)
        if x in members and old != new:
            raise PostconditionError("grid extension moved a fixed value", x)
    return out


def _dist_to(D: ValuedGroup, x, zeros) -> Fraction:
    grp = D.group
    return min(D(grp.sub(x, z)) for z in zeros)


def extend_semivalue_modulus(
    D: ValuedGroup,
    D0: Subgroup,
    lam0: Mapping,
    omega: Modulus,
    rho: Modulus | None = None,
    tau: Modulus | None = None,
    r=None,
) -> Semivalue:
    """Extend the semivalue ``lam0`` on ``D0`` to ``D`` below ``omega o lam``.

    ``lam_bar(x) = min_{h in D0} omega(lam(x - h)) + lam0(h)``, capped at
    ``r`` when ``lam0 <= r``.  With ``rho`` and ``tau`` supplied, the lower
    bound ``tau(dist(x, Z)) <= rho(lam_bar(x))`` (``Z`` the zeros of ``lam0``)
    is propagated from ``D0`` to ``D`` and asserted.
    """
    grp = D.group
    r = D.cap if r is None else as_rational(r)
    lam0 = {grp.check(tuple(h)): as_rational(v) for h, v in dict(lam0).items()}
    if set(lam0) != set(D0.elements):
        raise PreconditionError("lam0 must be defined exactly on the subgroup")
    for h, v in lam0.items():
        if v > omega(D(h)):
            raise PreconditionError("lam0 is not dominated by omega o lam", h)
    zeros = sorted(h for h, v in lam0.items() if v == 0)
    if (rho is None) != (tau is None):
        raise ValueError("rho and tau must be given together")
    if rho is not None:
        w = ort_witness(omega, rho, tau, r)
        if w is not None:
            raise PreconditionError("moduli fail the compatibility condition", w)
        for h, v in lam0.items():
            if tau(_dist_to(D, h, zeros)) > rho(v):
                raise PreconditionError("lower bound fails on the subgroup", h)
    table = []
    for x in grp.elements:
        table.append(min(omega(D(grp.sub(x, h))) + v for h, v in lam0.items()))
    if r != INF and max(lam0.values()) <= r:
        table = [min(t, r) for t in table]
    out = Semivalue(grp, tuple(table))
    # postconditions
    from .values import validate_semivalue

    try:
        validate_semivalue(grp, out.table)
    except AxiomViolation as exc:
        raise PostconditionError("extension is not a semivalue", exc.witness) from exc
    for x, v in zip(grp.elements, out.table):
        if v > omega(D(x)):
            raise PostconditionError("extension exceeds omega o lam", x)
        if x in lam0 and v != lam0[x]:
            raise PostconditionError("extension does not restrict to lam0", x)
        if (v == 0) != (x in zeros):
            raise PostconditionError("zero set changed", x)
        if r != INF and max(lam0.values()) <= r and v > r:
            raise PostconditionError("cap violated", x)
        if rho is not None and tau(_dist_to(D, x, zeros)) > rho(v):
            raise PostconditionError("lower bound lost", x)
    return out


__all__ = [
    "KatetovMap",
    "OneGenExtension",
    "check_trvN",
    "extend_onegen",
    "extend_semivalue_modulus",
    "extend_value_grid",
    "find_realizer",
    "midpoint_extend",
]
