"""Exact piecewise-linear functions on [0, inf) and moduli of continuity.

A :class:`PiecewiseLinear` is given by vertices ``(x_0=0, y_0), ..., (x_n, y_n)``
with strictly increasing ``x`` and a tail slope used past ``x_n``.  All
arithmetic is on :class:`~fractions.Fraction`; ``INF`` is accepted as an
argument and returns the limit.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AxiomViolation
from .rational import INF, as_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PiecewiseLinear:
    xs: tuple
    ys: tuple
    tail_slope: Fraction

    def __post_init__(self):
        xs = tuple(as_rational(x) for x in self.xs)
        ys = tuple(as_rational(y) for y in self.ys)
        if not xs or xs[0] != 0:
            raise ValueError("first vertex must sit at x=0")
        if len(xs) != len(ys):
            raise ValueError("xs and ys differ in length")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("vertices must have strictly increasing x")
        if INF in xs or INF in ys:
            raise ValueError("vertices must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "tail_slope", as_rational(self.tail_slope))

    @classmethod
    def from_points(cls, points: Iterable[Sequence], tail_slope=0) -> PiecewiseLinear:
        pts = [(as_rational(x), as_rational(y)) for x, y in points]
        return cls(tuple(p[0] for p in pts), tuple(p[1] for p in pts), tail_slope).simplified()

    @classmethod
    def sample(cls, fn, xs: Iterable, tail_slope) -> PiecewiseLinear:
        xs = sorted({as_rational(x) for x in xs} | {ZERO})
        return cls.from_points([(x, fn(x)) for x in xs], tail_slope)

    def __call__(self, t):
        if t == INF:
            return self.limit
        t = as_rational(t)
        if t < 0:
            raise ValueError("argument must be nonnegative")
        xs, ys = self.xs, self.ys
        i = bisect.bisect_right(xs, t) - 1
        if i == len(xs) - 1:
            return ys[-1] + self.tail_slope * (t - xs[-1])
        return ys[i] + (ys[i + 1] - ys[i]) * (t - xs[i]) / (xs[i + 1] - xs[i])

    @property
    def limit(self):
        if self.tail_slope > 0:
            return INF
        if self.tail_slope < 0:
            return -INF
        return self.ys[-1]

    @property
    def slopes(self) -> tuple:
        """Segment slopes followed by the tail slope."""
        seg = tuple((b - a) / (q - p) for p, q, a, b in zip(self.xs, self.xs[1:], self.ys, self.ys[1:]))
        return seg + (self.tail_slope,)

    @property
    def points(self) -> tuple:
        return tuple(zip(self.xs, self.ys))

    def simplified(self) -> PiecewiseLinear:
        """Drop vertices where the slope does not change."""
        xs, ys = list(self.xs), list(self.ys)
        slopes = list(self.slopes)
        keep_x, keep_y = [xs[0]], [ys[0]]
        for i in range(1, len(xs)):
            if slopes[i - 1] != slopes[i]:
                keep_x.append(xs[i])
                keep_y.append(ys[i])
        return PiecewiseLinear(tuple(keep_x), tuple(keep_y), self.tail_slope)

    def is_nondecreasing(self) -> bool:
        return all(s >= 0 for s in self.slopes)

    def decrease_witness(self):
        for i, s in enumerate(self.slopes):
            if s < 0:
                x = self.xs[i]
                return x, (self.xs[i + 1] if i + 1 < len(self.xs) else x + 1)
        return None

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in self.points)
        return f"PiecewiseLinear([{pts}], tail={self.tail_slope})"


def identity() -> PiecewiseLinear:
    return PiecewiseLinear((ZERO,), (ZERO,), ONE)


def constant(c) -> PiecewiseLinear:
    return PiecewiseLinear((ZERO,), (as_rational(c),), ZERO)


def linear(slope) -> PiecewiseLinear:
    return PiecewiseLinear((ZERO,), (ZERO,), as_rational(slope))


def nabla() -> PiecewiseLinear:
    """``t -> max(t, 1)``."""
    return PiecewiseLinear((ZERO, ONE), (ONE, ONE), ONE)


def _grid(*fs: PiecewiseLinear) -> list:
    return sorted(set().union(*(f.xs for f in fs)))


def _crossings(f: PiecewiseLinear, g: PiecewiseLinear, xs: list) -> list:
    out = []
    for a, b in zip(xs, xs[1:]):
        da, db = f(a) - g(a), f(b) - g(b)
        if da * db < 0:
            out.append(a + da * (b - a) / (da - db))
    last = xs[-1]
    d, ds = f(last) - g(last), f.tail_slope - g.tail_slope
    if d * ds < 0:
        out.append(last - d / ds)
    return out


def _combine(f, g, pick) -> PiecewiseLinear:
    xs = _grid(f, g)
    xs = sorted(set(xs) | set(_crossings(f, g, xs)))
    last = xs[-1]
    ys = [pick(f(x), g(x)) for x in xs]
    # beyond the last vertex no more crossings occur; compare one step further
    probe = last + 1
    fv, gv = f(probe), g(probe)
    tail = f.tail_slope if pick(fv, gv) == fv else g.tail_slope
    return PiecewiseLinear(tuple(xs), tuple(ys), tail).simplified()


def pl_max(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    return _combine(f, g, max)


def pl_min(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    return _combine(f, g, min)


def pl_add(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    xs = _grid(f, g)
    return PiecewiseLinear(tuple(xs), tuple(f(x) + g(x) for x in xs), f.tail_slope + g.tail_slope).simplified()


def pl_scale(f: PiecewiseLinear, a) -> PiecewiseLinear:
    a = as_rational(a)
    return PiecewiseLinear(f.xs, tuple(a * y for y in f.ys), a * f.tail_slope).simplified()


def pl_cap(f: PiecewiseLinear, c) -> PiecewiseLinear:
    c = as_rational(c)
    if c == INF:
        return f
    return pl_min(f, constant(c))


def pl_compose(outer: PiecewiseLinear, inner: PiecewiseLinear) -> PiecewiseLinear:
    """``outer o inner``; ``inner`` must be nondecreasing and nonnegative."""
    if not inner.is_nondecreasing() or inner.ys[0] < 0:
        raise ValueError("inner function must be nondecreasing and nonnegative")
    xs = set(inner.xs)
    bounds = list(inner.xs) + [None]
    for i, a in enumerate(inner.xs):
        b = bounds[i + 1]
        s = inner.slopes[i]
        if s == 0:
            continue
        lo, hi = inner(a), (inner(b) if b is not None else INF)
        for c in outer.xs:
            if lo < c < hi:
                xs.add(a + (c - lo) / s)
    xs = sorted(xs)
    ys = tuple(outer(inner(x)) for x in xs)
    tail = outer.tail_slope * inner.tail_slope if inner.tail_slope > 0 else ZERO
    return PiecewiseLinear(tuple(xs), ys, tail).simplified()


# -- moduli of continuity ----------------------------------------------------


def subadditivity_witness(f: PiecewiseLinear):
    """A pair ``(x, y)`` with ``f(x+y) > f(x) + f(y)``, or None.

    ``f(x) + f(y) - f(x+y)`` is linear on the cells cut by ``x = b_i``,
    ``y = b_j`` and ``x + y = b_k``; along the unbounded directions of those
    cells it is nondecreasing whenever the tail slope is nonnegative, so its
    minimum over ``x, y >= 0`` is attained at a cell vertex.
    """
    bs = f.xs
    cands = set()
    for bi in bs:
        for bj in bs:
            cands.add((bi, bj))
        for bk in bs:
            if bk >= bi:
                cands.add((bi, bk - bi))
                cands.add((bk - bi, bi))
    for x, y in sorted(cands):
        if f(x + y) > f(x) + f(y):
            return x, y
    if f.tail_slope < 0:
        far = bs[-1] + 1
        return far, far
    return None


@dataclass(frozen=True, repr=False)
class Modulus(PiecewiseLinear):
    """A nondecreasing subadditive piecewise-linear ``w`` with ``w(0) = 0``.

    Construct through :func:`make_modulus` (or :meth:`validate`) so the
    axioms are certified.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.ys[0] != 0:
            raise AxiomViolation("modulus w(0)=0", ZERO)
        w = self.decrease_witness()
        if w is not None:
            raise AxiomViolation("modulus nondecreasing", w)
        w = subadditivity_witness(self)
        if w is not None:
            raise AxiomViolation("modulus subadditive", w)

    @classmethod
    def validate(cls, f: PiecewiseLinear) -> Modulus:
        f = f.simplified()
        return cls(f.xs, f.ys, f.tail_slope)

    def is_nonvanishing(self) -> bool:
        """True iff ``w(t) > 0`` for every ``t > 0``."""
        if len(self.xs) > 1:
            return self.ys[1] > 0
        return self.tail_slope > 0

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in self.points)
        return f"Modulus([{pts}], tail={self.tail_slope})"


def make_modulus(points: Iterable[Sequence] = ((0, 0),), tail_slope=0) -> Modulus:
    return Modulus.validate(PiecewiseLinear.from_points(points, tail_slope))


def tail_slope(w: PiecewiseLinear) -> Fraction:
    """``lim w(t)/t``; a modulus with tail slope ``<= r`` lies in class ``r``."""
    return w.tail_slope


def mod_max(w: Modulus, t: Modulus) -> Modulus:
    return Modulus.validate(pl_max(w, t))


def mod_min(w: Modulus, t: Modulus) -> Modulus:
    return Modulus.validate(pl_min(w, t))


def mod_sum(w: Modulus, t: Modulus) -> Modulus:
    return Modulus.validate(pl_add(w, t))


def mod_compose(w: Modulus, t: Modulus) -> Modulus:
    return Modulus.validate(pl_compose(w, t))


def mod_cap(w: Modulus, c) -> Modulus:
    return Modulus.validate(pl_cap(w, c))


def build_ort_triple(w0: Modulus, rho0: Modulus, tau0: Modulus, r) -> tuple:
    """``(w0 v tau0, rho0 + id, tau0 ^ rho(r))`` with ``rho(inf)`` the limit."""
    w = mod_max(w0, tau0)
    rho = mod_sum(rho0, Modulus.validate(identity()))
    tau = mod_cap(tau0, rho(as_rational(r)))
    return w, rho, tau


def ort_witness(w: PiecewiseLinear, rho: PiecewiseLinear, tau: PiecewiseLinear, r):
    """First ``(t, s)`` violating ``tau(t) + rho(s) <= rho(w(t) + s)``, the
    string ``"r=1"`` if ``tau(1) > rho(1)`` with ``r = 1``, ``"tail"`` if the
    inequality fails only asymptotically, or None.

    On a strip ``T_i <= t <= T_{i+1}`` where ``w`` and ``tau`` are affine the
    defect ``rho(w(t)+s) - tau(t) - rho(s)`` is linear on the cells cut by
    ``s = c_j`` and ``w(t) + s = c_k`` (``c`` the vertices of ``rho``), so it
    suffices to test the cell vertices and the recession directions.
    """
    r = as_rational(r)
    if r == 1 and tau(ONE) > rho(ONE):
        return "r=1"
    T = sorted(set(w.xs) | set(tau.xs))
    cs = rho.xs

    def bad(t, s):
        return tau(t) + rho(s) > rho(w(t) + s)

    strips = list(zip(T, T[1:])) + [(T[-1], None)]
    for lo, hi in strips:
        probe = lo + 1 if hi is None else (lo + hi) / 2
        alpha = w(probe) - w(lo) if hi is None else (w(hi) - w(lo)) / (hi - lo)
        beta = w(lo) - alpha * lo
        ts = {lo} if hi is None else {lo, hi}
        for ck in cs:
            for cj in cs:
                if alpha != 0:
                    t = (ck - cj - beta) / alpha
                    if t >= lo and (hi is None or t <= hi):
                        ts.add(t)
        for t in sorted(ts):
            ss = set(cs)
            for ck in cs:
                s = ck - w(t)
                if s >= 0:
                    ss.add(s)
            for s in sorted(ss):
                if bad(t, s):
                    return t, s
    if rho.tail_slope * w.tail_slope < tau.tail_slope:
        return "tail"
    return None


def check_ort(w, rho, tau, r) -> bool:
    return ort_witness(w, rho, tau, r) is None


def pl_sup_diff(f: PiecewiseLinear, g: PiecewiseLinear):
    """``sup (f - g)`` over ``[0, inf)``."""
    xs = _grid(f, g)
    if f.tail_slope > g.tail_slope:
        return INF
    return max(f(x) - g(x) for x in xs)


__all__ = [
    "Modulus",
    "PiecewiseLinear",
    "build_ort_triple",
    "check_ort",
    "constant",
    "identity",
    "linear",
    "make_modulus",
    "mod_cap",
    "mod_compose",
    "mod_max",
    "mod_min",
    "mod_sum",
    "nabla",
    "ort_witness",
    "pl_add",
    "pl_cap",
    "pl_compose",
    "pl_max",
    "pl_min",
    "pl_scale",
    "pl_sup_diff",
    "subadditivity_witness",
    "tail_slope",
]
