"""Exact rational helpers: parsing, formatting, infinity, dyadic grids."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

INF = math.inf


def as_rational(x) -> Fraction | float:
    """Coerce ``x`` to a Fraction, passing ``INF`` through unchanged.

    Floats other than infinity are rejected: every value in this package is
    exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == INF:
            return INF
        raise TypeError(f"refusing inexact float {x!r}")
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_rational(s: str) -> Fraction | float:
    s = s.strip()
    if s in ("inf", "oo", "infinity"):
        return INF
    return Fraction(s)


def format_rational(x) -> str:
    """Serialize as ``"p/q"`` (always with a denominator) or ``"inf"``."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def is_on_grid(x, log2_denominator: int) -> bool:
    if x == INF:
        return False
    return (Fraction(x) * 2**log2_denominator).denominator == 1


def round_up_to_grid(x: Fraction, log2_denominator: int) -> Fraction:
    scale = 2**log2_denominator
    return Fraction(math.ceil(Fraction(x) * scale), scale)


def common_denominator(values: Iterable) -> int:
    den = 1
    for v in values:
        if v != INF:
            den = math.lcm(den, Fraction(v).denominator)
    return den
