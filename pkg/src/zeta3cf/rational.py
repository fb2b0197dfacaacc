"""Exact rational scalars: construction guards and truncating decimal output.

The scalar type used throughout the package is fractions.Fraction, which
already maintains the canonical form the rest of the code relies on: the
denominator is positive, gcd(|num|, den) == 1, and zero is stored as 0/1.
This module adds the two pieces Fraction does not provide: a constructor
that reports a zero denominator as a domain error instead of a bare
ZeroDivisionError, and decimal rendering that truncates toward zero (never
rounds), so printed digits do not depend on any rounding mode.
"""

from __future__ import annotations

import math
from fractions import Fraction


class ZeroDenominator(ZeroDivisionError):
    """Raised when a rational is constructed with denominator zero."""


def rat_make(num: int, den: int) -> Fraction:
    """Build num/den in canonical reduced form (positive denominator)."""
    if den == 0:
        raise ZeroDenominator(f"rational {num}/0 has a zero denominator")
    return Fraction(num, den)


def to_decimal(r: Fraction, digits: int) -> tuple[str, bool]:
    """Render r with exactly `digits` fractional digits, truncated toward zero.

    Returns (text, exact); exact is True when the expansion terminates
    within `digits` digits.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    sign = "-" if r < 0 else ""
    num = abs(r.numerator)
    den = r.denominator
    whole, rem = divmod(num, den)
    out = []
    for _ in range(digits):
        rem *= 10
        digit, rem = divmod(rem, den)
        out.append(chr(ord("0") + digit))
    return f"{sign}{whole}.{''.join(out)}", rem == 0


def truncate_float(x: float, places: int) -> str:
    """Format a float with `places` decimals, truncating toward zero."""
    scaled = int(abs(x) * 10**places)
    sign = "-" if x < 0 and scaled != 0 else ""
    text = str(scaled).rjust(places + 1, "0")
    return f"{sign}{text[:-places]}.{text[-places:]}" if places else f"{sign}{text}"


def _log10_int(n: int) -> float:
    shift = n.bit_length() - 53
    if shift <= 0:
        return math.log10(n)
    return math.log10(n >> shift) + shift * math.log10(2)


def log10_fraction(r: Fraction) -> float:
    """log10 of a positive rational, safe for arbitrarily large num/den."""
    if r <= 0:
        raise ValueError("log10 needs a positive value")
    return _log10_int(r.numerator) - _log10_int(r.denominator)


def sci_string(r: Fraction, sig_digits: int = 3) -> str:
    """Scientific notation with a truncated mantissa, computed exactly."""
    if r == 0:
        return "0"
    sign = "-" if r < 0 else ""
    a = abs(r)
    exp = math.floor(log10_fraction(a))
    # log10_fraction is float; land on the exact decade.
    while Fraction(10) ** exp > a:
        exp -= 1
    while Fraction(10) ** (exp + 1) <= a:
        exp += 1
    mantissa = str(int(a * Fraction(10) ** (sig_digits - 1 - exp)))
    return f"{sign}{mantissa[0]}.{mantissa[1:]}e{exp:+03d}"
