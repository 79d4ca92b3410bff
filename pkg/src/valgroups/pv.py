"""Step functions over a valued group, the integral norm, and norming functions.

A step function ``u`` on ``[0, inf)`` takes the value ``u_j`` on
``[t_{j-1}, t_j)`` (``t_0 = 0``) and vanishes after the last breakpoint.
Nonnegative rationals act by rescaling time, ``(t * u)(s) = u(s / t)``, and
``||u||_q`` integrates ``q(u(s))`` exactly.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import AxiomViolation, PreconditionError
from .groups import Element
from .piecewise import PiecewiseLinear, nabla
from .rational import INF, as_rational
from .values import ValuedGroup

ZERO = Fraction(0)
ONE = Fraction(1)


# -- step functions ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Normal form: strictly increasing breakpoints, adjacent values distinct,
    last value nonzero (the zero function has no pieces)."""

    host: ValuedGroup
    pieces: tuple = ()

    def __post_init__(self):
        G = self.host.group
        raw = []
        prev = ZERO
        for t, g in self.pieces:
            t = as_rational(t)
            if t <= prev:
                raise PreconditionError("breakpoints must be positive and strictly increasing", t)
            raw.append((t, G.check(tuple(g))))
            prev = t
        merged: list = []
        for t, g in raw:
            if merged and merged[-1][1] == g:
                merged[-1] = (t, g)
            else:
                merged.append((t, g))
        while merged and merged[-1][1] == G.zero:
            merged.pop()
        # popping trailing zeros can expose equal neighbours only if a zero
        # block sat between them, which the merge above already excluded
        object.__setattr__(self, "pieces", tuple(merged))

    @classmethod
    def zero(cls, host: ValuedGroup) -> StepFunction:
        return cls(host, ())

    @classmethod
    def hat(cls, host: ValuedGroup, h) -> StepFunction:
        """``h`` on ``[0, 1)``."""
        return cls(host, ((ONE, h),))

    @property
    def breakpoints(self) -> tuple:
        return tuple(t for t, _ in self.pieces)

    def __call__(self, s) -> Element:
        s = as_rational(s)
        if s < 0:
            raise ValueError("step functions live on [0, inf)")
        i = bisect.bisect_right(self.breakpoints, s)
        return self.pieces[i][1] if i < len(self.pieces) else self.host.group.zero

    def __eq__(self, other):
        return isinstance(other, StepFunction) and self.host == other.host and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        body = ", ".join(f"[{t}: {g}]" for t, g in self.pieces)
        return f"StepFunction({body})"

    def _same_host(self, other: StepFunction):
        if self.host is not other.host and (
            self.host.group != other.host.group or self.host.table != other.host.table
        ):
            raise PreconditionError("step functions over different hosts")

    def __add__(self, other: StepFunction) -> StepFunction:
        self._same_host(other)
        G = self.host.group
        ts = sorted(set(self.breakpoints) | set(other.breakpoints))
        pieces = []
        prev = ZERO
        for t in ts:
            pieces.append((t, G.add(self(prev), other(prev))))
            prev = t
        return StepFunction(self.host, tuple(pieces))

    def __neg__(self) -> StepFunction:
        G = self.host.group
        return StepFunction(self.host, tuple((t, G.neg(g)) for t, g in self.pieces))

    def __sub__(self, other: StepFunction) -> StepFunction:
        return self + (-other)

    def act(self, t) -> StepFunction:
        """``(t * u)(s) = u(s / t)``; ``0 * u = 0``."""
        t = as_rational(t)
        if t < 0 or t == INF:
            raise PreconditionError("scalars must be finite and nonnegative", t)
        if t == 0:
            return StepFunction.zero(self.host)
        return StepFunction(self.host, tuple((t * b, g) for b, g in self.pieces))

    def norm(self, q: ValuedGroup | None = None) -> Fraction:
        """``sum (t_j - t_{j-1}) * q(u_j)``; ``q`` defaults to the host value."""
        q = self.host if q is None else q
        total = ZERO
        prev = ZERO
        for t, g in self.pieces:
            total += (t - prev) * q(g)
            prev = t
        return total

    def decomposition(self) -> tuple:
        """The unique ``((t_j, h_j))`` with distinct ``t_j``, nonzero ``h_j`` and
        ``u = sum t_j * hat(h_j)``: ``h_j = u_j - u_{j+1}``."""
        G = self.host.group
        out = []
        for i, (t, g) in enumerate(self.pieces):
            nxt = self.pieces[i + 1][1] if i + 1 < len(self.pieces) else G.zero
            h = G.sub(g, nxt)
            if h != G.zero:
                out.append((t, h))
        return tuple(out)

    @classmethod
    def from_decomposition(cls, host: ValuedGroup, terms: Iterable) -> StepFunction:
        u = cls.zero(host)
        for t, h in terms:
            u = u + cls.hat(host, h).act(t)
        return u


def act(t, u: StepFunction) -> StepFunction:
    return u.act(t)


def hat(host: ValuedGroup, h) -> StepFunction:
    return StepFunction.hat(host, h)


def norm_q(u: StepFunction, q: ValuedGroup | None = None) -> Fraction:
    return u.norm(q)


# -- norming functions -------------------------------------------------------


@dataclass(frozen=True)
class NormingFunction:
    kappa: PiecewiseLinear
    lipschitz_L: Fraction
    vanishes_at_zero: bool = field(default=False)

    def __call__(self, t):
        return self.kappa(t)


def _sup_ratio_to_nabla(k: PiecewiseLinear) -> Fraction:
    """``sup k / max(id, 1)``: on ``[0, 1]`` a nondecreasing ``k`` peaks at 1;
    on ``[1, inf)`` ``k(x)/x`` is monotone between vertices, so the sup is at a
    vertex or is the tail slope."""
    cands = [k(ONE), k.tail_slope]
    cands += [k(x) / x for x in k.xs if x > 1]
    return max(cands)


def _nonneg_witness(f: PiecewiseLinear):
    """Some ``x >= 0`` with ``f(x) < 0``, or None."""
    for x, y in f.points:
        if y < 0:
            return x
    if f.tail_slope < 0:
        x = f.xs[-1]
        return x + (f.ys[-1] + 1) / (-f.tail_slope) + 1 if f.ys[-1] >= 0 else x
    return None


def _diff(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    xs = sorted(set(f.xs) | set(g.xs))
    return PiecewiseLinear(tuple(xs), tuple(f(x) - g(x) for x in xs), f.tail_slope - g.tail_slope)


def _piece(k: PiecewiseLinear, lo, hi):
    """Slope and intercept of ``k`` on ``[lo, hi]`` (no vertex inside)."""
    mid = lo + 1 if hi == INF else (lo + hi) / 2
    i = bisect.bisect_right(k.xs, mid) - 1
    s = k.slopes[i]
    return s, k.ys[i] - s * k.xs[i]


def _hyperbola_witness(k: PiecewiseLinear, c: Fraction):
    """Search ``x > 0`` with ``k(x) k(c/x) < k(c)``.

    Between consecutive cut points (vertices ``a`` and ``c / a``) the gap
    is ``h(x) = p x + q / x + s``.  Its infimum over an interval is at an
    endpoint, at ``x* = sqrt(q / p)`` when ``p, q > 0``, or the limit ``s``
    at infinity when ``p = 0``.
    """
    kc = k(c)
    pos = [a for a in k.xs if a > 0]
    cuts = sorted(set(pos) | {c / a for a in pos})
    bounds = [ZERO] + cuts + [INF]
    for lo, hi in zip(bounds, bounds[1:]):
        a1, b1 = _piece(k, lo, hi)
        # on this interval c/x runs through [c/hi, c/lo]; pick that piece
        ylo = ZERO if hi == INF else c / hi
        yhi = INF if lo == 0 else c / lo
        a2, b2 = _piece(k, ylo, yhi)
        p, q, s = a1 * b2, b1 * a2 * c, a1 * a2 * c + b1 * b2 - kc
        for x in (lo, hi):
            if x not in (ZERO, INF) and k(x) * k(c / x) < kc:
                return (x, c / x)
        if hi == INF and p == 0 and s < 0:
            x = max(lo, ONE) * 2
            while k(x) * k(c / x) >= kc:
                x *= 2
            return (x, c / x)
        if p > 0 and q > 0:
            x2 = q / p
            inside = lo * lo <= x2 and (hi == INF or x2 <= hi * hi)
            if inside and s < 0 and 4 * p * q < s * s:
                x = Fraction(math.sqrt(x2)).limit_denominator(10**9)
                return (x, c / x)
    return None


def nf2_witness(k: PiecewiseLinear):
    """A pair ``(x, y)`` with ``k(xy) > k(x) k(y)``, or None.

    ``g(x, y) = k(x) k(y) - k(xy)`` is bilinear on each cell cut by the lines
    ``x = a``, ``y = a`` and the hyperbolas ``xy = a`` (``a`` a vertex), so it
    has no interior minimum; it suffices to scan those curves.  Along a line
    ``x = a`` the function ``y -> g(a, y)`` is piecewise linear.  Towards
    infinity inside a cell the growth is controlled by ``k >= id``, which is
    checked beforehand.
    """
    from .piecewise import pl_compose, linear, pl_scale

    for a in k.xs:
        inner = linear(a)
        line = _diff(pl_scale(k, k(a)), pl_compose(k, inner) if a > 0 else PiecewiseLinear((ZERO,), (k(ZERO),), ZERO))
        w = _nonneg_witness(line)
        if w is not None:
            return (a, w)
    for c in k.xs:
        if c > 0:
            w = _hyperbola_witness(k, c)
            if w is not None:
                return w
    return None


def norming_failures(kappa: PiecewiseLinear, L=None) -> dict:
    """Axiom name -> witness for every failed condition.

    ``L`` is the declared constant: Lipschitz bound and ``kappa <= L * nabla``.
    Without ``L`` only the existence form of the Lipschitz condition is
    checked, which always holds for a piecewise-linear function.
    """
    out: dict = {}
    k = kappa
    if k(ONE) != 1:
        out["NF1"] = ("kappa(1)", k(ONE))
    else:
        from .piecewise import identity

        w = _nonneg_witness(_diff(k, identity()))
        if w is not None:
            out["NF1"] = ("kappa(x) < x", w)
    if not k.is_nondecreasing():
        out["NF3"] = k.decrease_witness()
    if L is not None:
        L = as_rational(L)
        for i, s in enumerate(k.slopes):
            if abs(s) > L:
                lo = k.xs[i]
                hi = k.xs[i + 1] if i + 1 < len(k.xs) else INF
                out["NF4"] = ("slope", lo, hi, s)
                break
        else:
            if _sup_ratio_to_nabla(k) > L:
                out["NF4"] = ("kappa > L * nabla", _sup_ratio_to_nabla(k))
    if "NF1" not in out:
        w = nf2_witness(k)
        if w is not None:
            out["NF2"] = w
    return out


def minimal_L(kappa: PiecewiseLinear) -> Fraction:
    """Least ``L >= 1`` bounding both the slopes of ``kappa`` and ``kappa / nabla``."""
    return max([ONE, _sup_ratio_to_nabla(kappa)] + [abs(s) for s in kappa.slopes])


def norming_validate(kappa: PiecewiseLinear, L=None) -> NormingFunction:
    """Validate ``kappa`` as a norming function and classify it.

    Raises :class:`AxiomViolation` naming the first failed axiom.  On success
    the bounds ``id <= kappa <= L id`` (when ``kappa(0) = 0``) or
    ``nabla <= kappa <= (L + 1) nabla`` (otherwise) are re-checked.
    """
    fails = norming_failures(kappa, L)
    for ax in ("NF1", "NF2", "NF3", "NF4"):
        if ax in fails:
            raise AxiomViolation(ax, fails[ax])
    L = minimal_L(kappa) if L is None else as_rational(L)
    from .piecewise import identity, linear, pl_scale

    if kappa(ZERO) == 0:
        lower, upper = identity(), linear(L)
    else:
        lower, upper = nabla(), pl_scale(nabla(), L + 1)
    for name, f in (("lower", _diff(kappa, lower)), ("upper", _diff(upper, kappa))):
        w = _nonneg_witness(f)
        if w is not None:
            raise AxiomViolation("classification", w, f"{name} comparison bound fails")
    return NormingFunction(kappa, L, kappa(ZERO) == 0)


# -- norm checks ---------------------------------------------------------------


@dataclass
class KappaReport:
    checked: int = 0
    equalities: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def homogeneous(self) -> bool:
        return self.equalities == self.checked


def check_kappa_norm(
    samples: Sequence[StepFunction],
    kappa,
    ts: Iterable,
    norm: Callable[[StepFunction], Fraction] | None = None,
) -> KappaReport:
    """Check ``||t * u|| <= kappa(t) ||u||`` on the sample grid, counting the
    cases of exact homogeneity ``||t * u|| = t ||u||``."""
    norm = (lambda u: u.norm()) if norm is None else norm
    ts = [as_rational(t) for t in ts]
    rep = KappaReport()
    for u in samples:
        nu = norm(u)
        for t in ts:
            lhs = norm(u.act(t))
            rep.checked += 1
            if lhs == t * nu:
                rep.equalities += 1
            if lhs > kappa(t) * nu:
                rep.violations.append((t, u, lhs, kappa(t) * nu))
    return rep


def corrupted_norm(q: ValuedGroup, bad: Element, factor=3, length=2) -> Callable[[StepFunction], Fraction]:
    """``||.||_q`` except that pieces of length ``length`` valued ``bad``
    count ``factor`` times; a negative control for :func:`check_kappa_norm`."""
    factor, length = as_rational(factor), as_rational(length)

    def norm(u: StepFunction) -> Fraction:
        total = ZERO
        prev = ZERO
        for t, g in u.pieces:
            w = q(g) * (factor if (g == bad and t - prev == length) else 1)
            total += (t - prev) * w
            prev = t
        return total

    return norm


def subnorm_estimate(u: StepFunction, p: Callable[[StepFunction], Fraction], alphas: Iterable) -> Fraction:
    """``max p(a * u) / max(a, 1)`` over the sampled ``a``; a lower estimate of
    the supremum over all ``a >= 0``."""
    best = ZERO
    for a in alphas:
        a = as_rational(a)
        best = max(best, p(u.act(a)) / max(a, ONE))
    return best


__all__ = [
    "KappaReport",
    "NormingFunction",
    "StepFunction",
    "act",
    "check_kappa_norm",
    "corrupted_norm",
    "hat",
    "minimal_L",
    "nf2_witness",
    "norm_q",
    "norming_failures",
    "norming_validate",
    "subnorm_estimate",
]
