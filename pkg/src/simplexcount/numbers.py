"""Number handling shared by every module: exact rationals or floats."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Real = Union[Fraction, int, float]

#: Default absolute tolerance on squared distances and hyperplane evaluations.
TOL = 1e-9


def is_exact(x: object) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(values) -> bool:
    return all(is_exact(v) for v in values)


def parse_number(text: Union[str, int, float, Fraction]) -> Real:
    """Parse a serialized coordinate.

    Integers and ``"p/q"`` strings become exact :class:`Fraction` values;
    decimal strings become floats.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a number: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip()
    if "/" in s:
        return Fraction(s)
    try:
        return Fraction(int(s))
    except ValueError:
        return float(s)


def format_rational(x: Real) -> str:
    """Render a rational as ``p/q`` (plain ``p`` when integral)."""
    q = Fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_number(x: Real) -> str:
    """Exact values as ``p/q``; floats with 12 significant digits."""
    if is_exact(x):
        return format_rational(x)
    return format(float(x), ".12g")


def sign(x: Real, tol: float = TOL) -> int:
    """Sign of ``x``; exact for rationals, tolerance-aware for floats."""
    if is_exact(x):
        return (x > 0) - (x < 0)
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1
