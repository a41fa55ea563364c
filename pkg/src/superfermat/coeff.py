"""Exact rational scalars and the checked float scalar used for smooth evaluation.

Rationals are :class:`fractions.Fraction`, which already keeps lowest terms
with a positive denominator and represents zero as ``0/1``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import DivisionByZero, DomainError, UserError

Rational = Fraction
Numeric = float

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings and ``p/q`` strings to a Fraction.

    Floats are converted exactly (``rat(0.1)`` is the binary value, not 1/10).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite scalar {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def rat_add(a, b) -> Fraction:
    return rat(a) + rat(b)


def rat_mul(a, b) -> Fraction:
    return rat(a) * rat(b)


def rat_div(a, b) -> Fraction:
    b = rat(b)
    if not b:
        raise DivisionByZero("division by zero")
    return rat(a) / b


def format_rational(q: Fraction) -> str:
    """``p/q``, or ``p`` when the denominator is 1."""
    return str(q)


def parse_rational(text: str) -> Fraction:
    try:
        q = Fraction(text.strip())
    except ZeroDivisionError:
        raise DivisionByZero(f"zero denominator in {text!r}") from None
    except ValueError:
        raise UserError(f"not a rational number: {text!r}") from None
    return q


def checked(value: float, node=None) -> float:
    """Return ``value`` as a float, refusing NaN and infinities."""
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"non-finite result {value!r}", node)
    return value
