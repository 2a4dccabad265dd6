"""Exact rational scalars and their string serialization."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

ScalarLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x: ScalarLike) -> Fraction:
    """Coerce ``x`` to an exact :class:`Fraction`.

    Strings of the form ``"p/q"`` or ``"p"`` are accepted. Floats are rejected
    on purpose: nothing in this package may depend on binary rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty scalar string")
        if "." in s or "e" in s.lower():
            raise ValueError(f"non-rational scalar literal {x!r}")
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {x!r}") from None
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact scalar")


def fmt(q: Fraction) -> str:
    """Render as ``"p/q"`` or ``"p"`` when the denominator is one."""
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
