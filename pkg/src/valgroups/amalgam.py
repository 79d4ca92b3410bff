"""Gluing two finite valued groups along a common part.

All three constructions start from the same pushout: the product
``D1 x D2`` divided by the graph ``{(x, -phi(x))}`` of the gluing map.  They
differ in how the value on the pushout is defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import PostconditionError, PreconditionError
from .groups import FiniteAbelianGroup, GroupHom, Subgroup, quotient, subgroup_from_elements
from .rational import INF, as_rational
from .values import Semivalue, ValuedGroup, push_value, validate_value


@dataclass(frozen=True)
class AmalgamResult:
    result: ValuedGroup
    psi1: GroupHom
    psi2: GroupHom
    diagnostics: dict = field(default_factory=dict)


def _mapping(h) -> dict:
    if isinstance(h, GroupHom):
        return dict(h.mapping)
    return {tuple(k): tuple(v) for k, v in dict(h).items()}


def _isometry_witness(m: Mapping, src: ValuedGroup, dst: ValuedGroup):
    for x, y in m.items():
        if src(x) != dst(y):
            return x
    return None


def _additivity_witness(m: Mapping, G: FiniteAbelianGroup, H: FiniteAbelianGroup):
    for x in m:
        for y in m:
            s = G.add(x, y)
            if s not in m or m[s] != H.add(m[x], m[y]):
                return x, y
    return None


class _Pushout:
    """``(D1 x D2) / {(x, -g(x)) : x in dom}`` with its projection."""

    def __init__(self, G1: FiniteAbelianGroup, G2: FiniteAbelianGroup, glue: Mapping):
        self.G1, self.G2 = G1, G2
        self.P = G1.direct_product(G2)
        rel = [x + G2.neg(y) for x, y in glue.items()]
        K = subgroup_from_elements(self.P, rel)
        self.Q, self.pi = quotient(self.P, K)

    def __call__(self, x1, x2):
        return self.pi(tuple(x1) + tuple(x2))

    def psi1(self, x1):
        return self(x1, self.G2.zero)

    def psi2(self, x2):
        return self(self.G1.zero, x2)


def _finish(po: _Pushout, sv: Semivalue, r, N, D1: ValuedGroup, D2: ValuedGroup, quotient_nulls: bool):
    """Quotient by nulls, cap, validate; return (value, psi1, psi2)."""
    Q = po.Q
    proj = GroupHom.identity(Q)
    if quotient_nulls:
        Z = subgroup_from_elements(Q, sv.zeros())
        if Z.order > 1:
            Q2, proj = quotient(Q, Z)
            sv = push_value(sv, proj)
    table = sv.table
    if r != INF:
        table = tuple(min(t, r) for t in table)
    try:
        val = validate_value(sv.group, table, r, N)
    except Exception as exc:
        raise PostconditionError(f"amalgam value invalid: {exc}", getattr(exc, "witness", None)) from exc
    G1, G2 = D1.group, D2.group
    psi1 = GroupHom(G1, val.group, {x: proj(po.psi1(x)) for x in G1.elements})
    psi2 = GroupHom(G2, val.group, {x: proj(po.psi2(x)) for x in G2.elements})
    for psi, D in ((psi1, D1), (psi2, D2)):
        w = _isometry_witness(psi.mapping, D, val)
        if w is not None:
            raise PostconditionError("embedding is not isometric", w)
    return val, psi1, psi2


def _class(D1: ValuedGroup, D2: ValuedGroup, r, N):
    r = min(D1.cap, D2.cap) if r is None else as_rational(r)
    if N is None:
        N = math.lcm(D1.exponent, D2.exponent) if D1.exponent and D2.exponent else 0
    for D in (D1, D2):
        if r == 1 and max(D.table) > 1:
            raise PreconditionError("input value exceeds cap 1")
        if N and not D.group.has_exponent(N):
            raise PreconditionError(f"input group is not of exponent {N}")
    return r, N


def amalgamate(
    D0: ValuedGroup, D1: ValuedGroup, D2: ValuedGroup, phi1, phi2, r=None, N=None
) -> AmalgamResult:
    """Isometric amalgam of ``D1`` and ``D2`` over ``D0``.

    The value of a coset is the least ``lam1(x1) + lam2(x2)`` over its
    representatives ``(x1, x2)``.
    """
    r, N = _class(D1, D2, r, N)
    m1, m2 = _mapping(phi1), _mapping(phi2)
    for m, D in ((m1, D1), (m2, D2)):
        if set(m) != set(D0.group.elements):
            raise PreconditionError("gluing map must be total on the common group")
        w = _additivity_witness(m, D0.group, D.group)
        if w is not None:
            raise PreconditionError("gluing map is not a homomorphism", w)
        w = _isometry_witness(m, D0, D)
        if w is not None:
            raise PreconditionError("gluing map is not isometric", w)
    glue = {m1[x]: m2[x] for x in D0.group.elements}
    po = _Pushout(D1.group, D2.group, glue)
    s = Semivalue(po.P, tuple(D1(x[: D1.group.rank]) + D2(x[D1.group.rank :]) for x in po.P.elements))
    val, psi1, psi2 = _finish(po, push_value(s, po.pi), r, N, D1, D2, quotient_nulls=True)
    for x in D0.group.elements:
        if psi1(m1[x]) != psi2(m2[x]):
            raise PostconditionError("amalgamation square does not commute", x)
    return AmalgamResult(val, psi1, psi2, {"square_defect": Fraction(0)})


def almost_isometry_defect(v: Mapping, D1: ValuedGroup, D2: ValuedGroup) -> Fraction:
    """Least ``eps`` with ``(1-eps) lam1 <= lam2 o v <= (1+eps) lam1``."""
    worst = Fraction(0)
    for x, y in v.items():
        a, b = D1(x), D2(y)
        if a:
            worst = max(worst, abs(b - a) / a)
        elif b:
            return INF
    return worst


def amalgamate_approx(
    D1: ValuedGroup, D0: Subgroup, D2: ValuedGroup, u, v, eps, r=None, N=None
) -> AmalgamResult:
    """Amalgam for an exact map ``u`` on ``D0`` and an almost isometric ``v``.

    Returns isometric ``w1, w2`` with ``w1 = w2 o u`` on ``D0`` and
    ``sup |w1 - w2 o v| <= (1 + diam D1) * eps``.
    """
    r, N = _class(D1, D2, r, N)
    eps = as_rational(eps)
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    G1, G2 = D1.group, D2.group
    mu, mv = _mapping(u), _mapping(v)
    if set(mu) != set(D0.elements) or set(mv) != set(G1.elements):
        raise PreconditionError("u must be total on D0 and v total on D1")
    for m, G in ((mu, G1), (mv, G1)):
        w = _additivity_witness(m, G, G2)
        if w is not None:
            raise PreconditionError("map is not a homomorphism", w)
    w = _isometry_witness(mu, D1, D2)
    if w is not None:
        raise PreconditionError("u is not isometric", w)
    for x in D0.elements:
        if D2(G2.sub(mu[x], mv[x])) > eps:
            raise PreconditionError("u and v differ by more than eps on D0", x)
    for x, y in mv.items():
        if not ((1 - eps) * D1(x) <= D2(y) <= (1 + eps) * D1(x)):
            raise PreconditionError("v is not eps-almost isometric", x)
    A = 1 + max(D1.table)
    po = _Pushout(G1, G2, mu)
    Q = po.Q
    # each x0 contributes a shift d(x0) = w1(x0) - w2(v(x0)) and a price
    shifts = []
    for x0 in G1.elements:
        d = po(x0, G2.neg(mv[x0]))
        shifts.append((x0, d, A * eps if d != Q.zero else Fraction(0)))
    best: dict = {}
    for x1 in G1.elements:
        for x2 in G2.elements:
            z = po(x1, x2)
            for x0, _d, price in shifts:
                val = D1(G1.sub(x1, x0)) + price + D2(G2.add(x2, mv[x0]))
                if z not in best or val < best[z]:
                    best[z] = val
    sv = Semivalue(Q, tuple(best[z] for z in Q.elements))
    if len(sv.zeros()) != 1:
        raise PostconditionError("approximate amalgam value vanishes off zero", sv.zeros())
    val, w1, w2 = _finish(po, sv, r, N, D1, D2, quotient_nulls=False)
    for x in D0.elements:
        if w1(x) != w2(mu[x]):
            raise PostconditionError("w1 and w2 o u disagree on D0", x)
    dist = max(val(val.group.sub(w1(x), w2(mv[x]))) for x in G1.elements)
    if dist > A * eps:
        raise PostconditionError("sup distance exceeds A*eps", dist)
    return AmalgamResult(val, w1, w2, {"sup_distance": dist, "bound": A * eps, "A": A})


def amalgamate_mixed(
    D1: ValuedGroup, E1: Subgroup, E2: Subgroup, D2: ValuedGroup, phi1, phi2, eps, r=None, N=None
) -> AmalgamResult:
    """Glue along ``phi1`` exactly and along ``phi2`` up to ``eps``.

    Returns isometric ``psi1, psi2`` with ``psi2 o phi1 = psi1`` on ``E1`` and
    ``sup |psi1 - psi2 o phi2| <= eps`` on ``E2``.
    """
    r, N = _class(D1, D2, r, N)
    eps = as_rational(eps)
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    G1, G2 = D1.group, D2.group
    m1, m2 = _mapping(phi1), _mapping(phi2)
    for m, E in ((m1, E1), (m2, E2)):
        if set(m) != set(E.elements):
            raise PreconditionError("gluing map must be total on its subgroup")
        w = _additivity_witness(m, G1, G2)
        if w is not None:
            raise PreconditionError("gluing map is not a homomorphism", w)
        w = _isometry_witness(m, D1, D2)
        if w is not None:
            raise PreconditionError("gluing map is not isometric", w)
    for x1 in E1.elements:
        for x2 in E2.elements:
            if abs(D2(G2.sub(m1[x1], m2[x2])) - D1(G1.sub(x1, x2))) > eps:
                raise PreconditionError("compatibility bound fails", (x1, x2))
    po = _Pushout(G1, G2, m1)
    Q = po.Q
    mids = []
    for x2 in E2.elements:
        d = po(x2, G2.neg(m2[x2]))
        mids.append((x2, eps if d != Q.zero else Fraction(0)))
    best: dict = {}
    for x1 in G1.elements:
        for y in G2.elements:
            z = po(x1, y)
            for x2, price in mids:
                val = D1(G1.sub(x1, x2)) + price + D2(G2.add(y, m2[x2]))
                if z not in best or val < best[z]:
                    best[z] = val
    sv = Semivalue(Q, tuple(best[z] for z in Q.elements))
    val, psi1, psi2 = _finish(po, sv, r, N, D1, D2, quotient_nulls=True)
    for x in E1.elements:
        if psi2(m1[x]) != psi1(x):
            raise PostconditionError("psi2 o phi1 differs from psi1 on E1", x)
    dist = max(val(val.group.sub(psi1(x), psi2(m2[x]))) for x in E2.elements)
    if dist > eps:
        raise PostconditionError("sup distance exceeds eps", dist)
    return AmalgamResult(val, psi1, psi2, {"sup_distance": dist, "bound": eps})


__all__ = [
    "AmalgamResult",
    "almost_isometry_defect",
    "amalgamate",
    "amalgamate_approx",
    "amalgamate_mixed",
]
