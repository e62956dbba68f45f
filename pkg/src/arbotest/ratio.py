"""Exact rational helpers used for threshold arithmetic."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Ratio = Union[Fraction, int, str, float]


def as_fraction(value: Ratio) -> Fraction:
    """Coerce to an exact Fraction.

    Floats go through their shortest decimal repr, so 0.05 means exactly
    1/20 rather than the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def frac_floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def sqrt_ceil(x: Union[Fraction, int]) -> int:
    """Smallest integer t >= 0 with t*t >= x."""
    c = frac_ceil(Fraction(x))
    if c <= 0:
        return 0
    r = math.isqrt(c)
    return r if r * r >= c else r + 1


def ln_inverse(x: Fraction) -> float:
    """ln(1/x) for a positive fraction; safe for astronomically small x."""
    if x <= 0:
        raise ValueError("ln_inverse needs a positive fraction")
    return math.log(x.denominator) - math.log(x.numerator)


def peel_iterations(eps: Ratio) -> int:
    """Smallest L with (6/5)**L >= 1/eps, computed exactly."""
    e = as_fraction(eps)
    if not 0 < e <= 1:
        raise ValueError(f"eps must be in (0, 1], got {e}")
    level = 0
    num, den = 1, 1
    while num * e.numerator < den * e.denominator:
        num *= 6
        den *= 5
        level += 1
    return level
