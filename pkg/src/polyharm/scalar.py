"""Exact rational scalars.

All coefficients in the package are `fractions.Fraction` values; this module
adds the strict string form used by the JSON interfaces: "p" or "p/q" with a
positive denominator and no decimal points.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

Scalar = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/([1-9]\d*))?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" (q > 0, decimal-free) into a Fraction."""
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise ParseError(f"not a rational 'p' or 'p/q' string: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Render a Fraction in the canonical "p" / "p/q" form."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
