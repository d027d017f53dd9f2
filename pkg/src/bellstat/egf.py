"""Exact truncated exponential generating series.

A series is stored by its ordinary coefficients c_0..c_N (the coefficient of
x^n), all ``Fraction``. The count it enumerates at size n is n! * c_n, which
is recovered only on extraction (:func:`count_at`). Keeping c_n rather than
n! * c_n makes the product a plain Cauchy product; the binomial-weighted
product rule for counts follows from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Iterable

SERIES_KINDS = ("exp_minus_1", "exp_minus_x_minus_1", "x", "one", "zero")


class NotACountError(ValueError):
    """n! * c_n is not an integer, so the series does not count objects at n."""


@dataclass(frozen=True)
class TruncatedEGF:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_counts(cls, counts: Iterable[int | Fraction]) -> "TruncatedEGF":
        """Build sum a_n x^n / n! from the counts a_0..a_N."""
        return cls(tuple(Fraction(a) / factorial(n) for n, a in enumerate(counts)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the lowest nonzero coefficient, or None for the zero series."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def coefficient(self, n: int) -> Fraction:
        _check_index(self, n)
        return self.coeffs[n]

    def counts(self) -> list[Fraction]:
        return [c * factorial(n) for n, c in enumerate(self.coeffs)]

    def __add__(self, other: "TruncatedEGF") -> "TruncatedEGF":
        return egf_add(self, other)

    def __mul__(self, other: "TruncatedEGF") -> "TruncatedEGF":
        return egf_mul(self, other)

    def __pow__(self, k: int) -> "TruncatedEGF":
        return egf_pow(self, k)


def _check_orders(f: TruncatedEGF, g: TruncatedEGF) -> None:
    if f.order != g.order:
        raise ValueError(f"order mismatch: {f.order} vs {g.order}")


def _check_index(f: TruncatedEGF, n: int) -> None:
    if not 0 <= n <= f.order:
        raise ValueError(f"index {n} outside series of order {f.order}")


def base_series(kind: str, order: int) -> TruncatedEGF:
    """One of the building-block series, truncated at ``order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    zero = Fraction(0)
    if kind == "zero":
        coeffs = [zero] * (order + 1)
    elif kind == "one":
        coeffs = [Fraction(1)] + [zero] * order
    elif kind == "x":
        coeffs = [zero] * (order + 1)
        if order >= 1:
            coeffs[1] = Fraction(1)
    elif kind in ("exp_minus_1", "exp_minus_x_minus_1"):
        coeffs = [Fraction(1, factorial(n)) for n in range(order + 1)]
        drop = 1 if kind == "exp_minus_1" else 2
        for n in range(min(drop, order + 1)):
            coeffs[n] = zero
    else:
        raise ValueError(f"unknown series kind {kind!r}; expected one of {SERIES_KINDS}")
    return TruncatedEGF(tuple(coeffs))


def egf_add(f: TruncatedEGF, g: TruncatedEGF) -> TruncatedEGF:
    _check_orders(f, g)
    return TruncatedEGF(tuple(a + b for a, b in zip(f.coeffs, g.coeffs)))


def egf_scale(f: TruncatedEGF, c: Fraction | int) -> TruncatedEGF:
    c = Fraction(c)
    return TruncatedEGF(tuple(a * c for a in f.coeffs))


def _integer_form(f: TruncatedEGF) -> tuple[list[int], int]:
    """Numerators over the lcm of all denominators."""
    den = lcm(*(c.denominator for c in f.coeffs))
    return [c.numerator * (den // c.denominator) for c in f.coeffs], den


def egf_mul(f: TruncatedEGF, g: TruncatedEGF) -> TruncatedEGF:
    """Cauchy product truncated at the common order.

    Both factors are lifted to integers over a common denominator so the
    inner loop is pure int arithmetic; ``Fraction`` reduces each result
    coefficient to lowest terms.
    """
    _check_orders(f, g)
    a, da = _integer_form(f)
    b, db = _integer_form(g)
    N = f.order
    a_nz = [(j, v) for j, v in enumerate(a) if v]
    b_nz = [(j, v) for j, v in enumerate(b) if v]
    out = [0] * (N + 1)
    for j, u in a_nz:
        for l, v in b_nz:
            if j + l > N:
                break
            out[j + l] += u * v
    den = da * db
    return TruncatedEGF(tuple(Fraction(h, den) for h in out))


def egf_pow(f: TruncatedEGF, k: int) -> TruncatedEGF:
    if k < 0:
        raise ValueError("power must be nonnegative")
    result = base_series("one", f.order)
    base = f
    while k:
        if k & 1:
            result = egf_mul(result, base)
        k >>= 1
        if k:
            base = egf_mul(base, base)
    return result


def egf_exp(f: TruncatedEGF) -> TruncatedEGF:
    """sum_k f^k / k!, truncated.

    f must have zero constant term, so f^k starts at x^k or later and the sum
    stops once the running power vanishes below the truncation order.
    """
    if f.coeffs[0] != 0:
        raise ValueError("egf_exp needs a series with zero constant term")
    total = base_series("one", f.order)
    term = total
    for k in range(1, f.order + 1):
        term = egf_scale(egf_mul(term, f), Fraction(1, k))
        if term.is_zero():
            break
        total = egf_add(total, term)
    return total


def count_at(f: TruncatedEGF, n: int) -> int:
    """The count n! * c_n; raises :class:`NotACountError` if it is fractional."""
    _check_index(f, n)
    value = f.coeffs[n] * factorial(n)
    if value.denominator != 1:
        raise NotACountError(f"n! * c_n = {value} at n={n} is not an integer")
    return value.numerator
