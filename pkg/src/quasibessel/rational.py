"""Exact rational arithmetic for shifting indices and step computation.

Shifting indices, the power on the zeroth-order factor, and the series step
must sit on a common lattice, so they are carried as exact fractions from the
moment they are parsed.  Inputs arrive as decimal strings or integer pairs;
binary floats are rejected because recovering the intended fraction from a
float is ill-posed.  Python integers are arbitrary precision, so none of the
operations here can overflow.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "Rational",
    "RationalLike",
    "parse_decimal",
    "as_rational",
    "lcd",
    "gcf",
    "decimal_string",
]

Rational = Fraction
RationalLike = Union[Fraction, int, str]

# optional sign, integer digits, optional fractional part ("3", "-2.1", "0.80")
_DECIMAL_RE = re.compile(r"[+-]?\d+(?:\.\d*)?")


def parse_decimal(text: str) -> Fraction:
    """Parse a finite decimal string into an exact, reduced fraction.

    >>> parse_decimal("0.8")
    Fraction(4, 5)
    >>> parse_decimal("3")
    Fraction(3, 1)
    """
    s = text.strip()
    if not _DECIMAL_RE.fullmatch(s):
        raise ValueError(f"not a finite decimal string: {text!r}")
    return Fraction(s)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce a decimal string, int, or Fraction to an exact Fraction.

    Floats are rejected on purpose: exactness of the shifting indices is what
    makes the step lattice computable, and a float does not carry the decimal
    the user meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):  # bool is an int subclass; do not accept it
        raise TypeError("expected a rational value, got bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_decimal(value)
    if isinstance(value, float):
        raise TypeError(
            f"refusing to convert float {value!r}; pass a decimal string "
            "or a Fraction so the value stays exact"
        )
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def lcd(values: Iterable[Fraction]) -> int:
    """Least common denominator of a non-empty collection of fractions."""
    dens = [v.denominator for v in values]
    if not dens:
        raise ValueError("lcd() of an empty collection")
    return math.lcm(*dens)


def gcf(values: Iterable[int]) -> int:
    """Greatest common factor of a non-empty collection of positive integers."""
    vals = list(values)
    if not vals:
        raise ValueError("gcf() of an empty collection")
    if any(v <= 0 for v in vals):
        raise ValueError(f"gcf() expects positive integers, got {vals}")
    return math.gcd(*vals)


def decimal_string(q: Fraction) -> str:
    """Exact decimal representation of ``q``; the inverse of parse_decimal.

    Raises ValueError if the reduced denominator has a prime factor other
    than 2 or 5 (no finite decimal exists then).
    """
    num, den = q.numerator, q.denominator
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        raise ValueError(f"{q} has no finite decimal representation")
    k = max(twos, fives)
    scaled = abs(num) * 10**k // den
    sign = "-" if num < 0 else ""
    if k == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(k + 1, "0")
    whole, frac = digits[:-k], digits[-k:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"
