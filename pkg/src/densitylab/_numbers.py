"""Exact rounding of densities and slacks given as decimal floats."""

from fractions import Fraction
import math


def exact(x) -> Fraction:
    """The decimal value a float was written as (0.1 -> 1/10), exactly."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def ceil_exact(x) -> int:
    return math.ceil(exact(x))


def floor_exact(x) -> int:
    return math.floor(exact(x))
