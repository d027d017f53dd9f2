"""Decimal renderings of exact values.

Every rendering is a single correctly rounded division of the exact numerator
by the exact denominator (``decimal`` builds both operands exactly and rounds
only the quotient), so no intermediate float ever touches a probability.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import MAX_EMAX, MIN_EMIN, ROUND_HALF_UP, Context, Decimal
from fractions import Fraction

# Percent values below this are written as 0.ddd×10⁻ᵉ %.
SCIENTIFIC_BELOW_PERCENT = Fraction(1, 10**6)

_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")
_DIGITS_RE = re.compile(r"-?[0-9]+")


def int_to_decimal(x: int) -> str:
    """Decimal digits of ``x`` without the interpreter's int->str digit limit."""
    return str(Decimal(x))


def decimal_to_int(s: str) -> int:
    if not _DIGITS_RE.fullmatch(s):
        raise ValueError(f"not a decimal integer: {s[:40]!r}")
    return int(Decimal(s))


def round_significant(x: Fraction, digits: int) -> Decimal:
    if digits < 1:
        raise ValueError("digits must be at least 1")
    ctx = Context(prec=digits, rounding=ROUND_HALF_UP, Emin=MIN_EMIN, Emax=MAX_EMAX)
    q = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    if not q:
        return q
    # exact quotients come back short (0.035, not 0.0350); pad to `digits`
    return ctx.quantize(q, Decimal(1).scaleb(q.adjusted() - digits + 1))


def format_significant(x: Fraction, digits: int = 3) -> str:
    """Plain positional notation for moderate magnitudes, e-notation otherwise."""
    if x == 0:
        return "0"
    d = round_significant(x, digits)
    if -6 <= d.adjusted() < 21:
        return format(d, "f")
    return format(d, f".{digits - 1}e")


def format_scientific(x: Fraction, digits: int = 3) -> str:
    if x == 0:
        return "0"
    return format(round_significant(x, digits), f".{digits - 1}e")


def format_percent(p: Fraction, digits: int = 3) -> str:
    """``p`` as a percentage with ``digits`` significant digits.

    >>> format_percent(Fraction(715, 4140), 2)
    '17%'
    """
    pct = p * 100
    if pct == 0:
        return "0%"
    d = round_significant(abs(pct), digits)
    sign = "-" if pct < 0 else ""
    if abs(pct) >= SCIENTIFIC_BELOW_PERCENT:
        return f"{sign}{format(d, 'f')}%"
    mantissa = "".join(map(str, d.as_tuple().digits)).ljust(digits, "0")
    exponent = str(d.adjusted() + 1).translate(_SUPERSCRIPT)
    return f"{sign}0.{mantissa}×10{exponent} %"


@dataclass(frozen=True)
class ProbabilityRendering:
    exact: Fraction = field(repr=False)
    digits: int
    scientific: str
    percent: str

    def exact_dict(self) -> dict[str, str]:
        return {
            "numerator": int_to_decimal(self.exact.numerator),
            "denominator": int_to_decimal(self.exact.denominator),
        }

    def rendered_dict(self) -> dict[str, object]:
        return {"scientific": self.scientific, "percent": self.percent, "digits": self.digits}


def render_probability(p: Fraction, digits: int = 3) -> ProbabilityRendering:
    p = Fraction(p)
    return ProbabilityRendering(p, digits, format_scientific(p, digits), format_percent(p, digits))
