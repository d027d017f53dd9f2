"""Exact statistics of a uniformly random set partition ("classification").

Each of the B(n) set partitions of an n-set is equally likely. The number of
blocks (families) then has mass S(n, k) / B(n), and a block of size one is an
isolate. Everything here is an exact ``Fraction``; decimals appear only in
:mod:`bellstat.render`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .combinatorics import associated_stirling_row, associated_stirling_rows, stirling_row
from .egf import base_series, count_at, egf_add, egf_exp, egf_mul, egf_pow, egf_scale
from .render import ProbabilityRendering, render_probability

COUNT_METHODS = ("table", "egf")


@dataclass(frozen=True)
class FamilyDistribution:
    """Law of the number of families for n languages.

    ``counts[k]`` is S(n, k) and ``total`` is B(n).
    """

    n: int
    counts: tuple[int, ...]
    total: int

    def mass(self, k: int) -> Fraction:
        if 0 <= k <= self.n:
            return Fraction(self.counts[k], self.total)
        return Fraction(0)

    def range_count(self, a: int, b: int) -> int:
        if a > b:
            raise ValueError(f"empty range: a={a} > b={b}")
        lo, hi = max(a, 0), min(b, self.n)
        return sum(self.counts[lo : hi + 1]) if lo <= hi else 0

    def range_mass(self, a: int, b: int) -> Fraction:
        return Fraction(self.range_count(a, b), self.total)

    def mean(self) -> Fraction:
        return Fraction(sum(k * c for k, c in enumerate(self.counts)), self.total)

    def mode(self) -> tuple[int, bool]:
        """(smallest maximizing k, whether another k attains the same count)."""
        best = max(self.counts)
        winners = [k for k, c in enumerate(self.counts) if c == best]
        return winners[0], len(winners) > 1


def family_distribution(n: int) -> FamilyDistribution:
    if n < 1:
        raise ValueError("need at least one language to classify")
    row = stirling_row(n)
    return FamilyDistribution(n, row, sum(row))


def family_range_probability(n: int, a: int, b: int) -> Fraction:
    if a > b:
        raise ValueError(f"empty range: a={a} > b={b}")
    return family_distribution(n).range_mass(a, b)


def prob_family_range(n: int, a: int, b: int, digits: int = 3) -> ProbabilityRendering:
    """P(a <= number of families <= b) with its decimal renderings."""
    return render_probability(family_range_probability(n, a, b), digits)


def family_range_count_egf(n: int, a: int, b: int) -> int:
    """Partitions of an n-set with between a and b blocks, by EGF extraction.

    Sums (e^x - 1)^k / k! over the range; independent of the Stirling table.
    """
    if a > b:
        raise ValueError(f"empty range: a={a} > b={b}")
    unit = base_series("exp_minus_1", n)
    total = base_series("zero", n)
    for k in range(max(a, 0), min(b, n) + 1):
        total = egf_add(total, egf_scale(egf_pow(unit, k), Fraction(1, factorial(k))))
    return count_at(total, n)


def family_mode(n: int) -> int:
    return family_distribution(n).mode()[0]


def no_isolate_count(n: int, method: str = "table") -> int:
    """A(n): classifications of n languages with no isolate."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if method == "table":
        return sum(associated_stirling_row(n))
    if method == "egf":
        return count_at(egf_exp(base_series("exp_minus_x_minus_1", n)), n)
    raise ValueError(f"unknown method {method!r}; expected one of {COUNT_METHODS}")


def prob_no_isolates(n: int, digits: int = 3) -> ProbabilityRendering:
    if n < 1:
        raise ValueError("need at least one language to classify")
    return render_probability(Fraction(no_isolate_count(n), sum(stirling_row(n))), digits)


def _check_nfi(n: int, f: int, i: int) -> None:
    if not 0 <= i <= f <= n:
        raise ValueError(f"need 0 <= i <= f <= n, got n={n}, f={f}, i={i}")


def family_isolate_count(n: int, f: int, i: int, method: str = "table") -> int:
    """Classifications of n languages into f families, exactly i of them isolates.

    Choose the isolates, then split the remaining n - i languages into f - i
    families of size at least two.
    """
    _check_nfi(n, f, i)
    if method == "table":
        k = f - i
        if 2 * k > n - i:
            return 0
        return comb(n, i) * associated_stirling_row(n - i)[k]
    if method == "egf":
        isolates = egf_scale(egf_pow(base_series("x", n), i), Fraction(1, factorial(i)))
        rest = egf_scale(
            egf_pow(base_series("exp_minus_x_minus_1", n), f - i), Fraction(1, factorial(f - i))
        )
        return count_at(egf_mul(isolates, rest), n)
    raise ValueError(f"unknown method {method!r}; expected one of {COUNT_METHODS}")


@dataclass(frozen=True)
class IsolateDistribution:
    """Isolate counts among classifications with exactly f families.

    ``counts[i]`` is N(n, f, i) for i = 0..f and ``total`` is S(n, f).
    """

    n: int
    f: int
    counts: tuple[int, ...]
    total: int

    def prob(self, i: int) -> Fraction:
        if 0 <= i <= self.f:
            return Fraction(self.counts[i], self.total)
        return Fraction(0)

    def mean(self) -> Fraction:
        return Fraction(sum(i * c for i, c in enumerate(self.counts)), self.total)

    def variance(self) -> Fraction:
        m = self.mean()
        second = Fraction(sum(i * i * c for i, c in enumerate(self.counts)), self.total)
        return second - m * m

    def tail(self, t: int) -> Fraction:
        """P(isolates > t)."""
        lo = max(t + 1, 0)
        return Fraction(sum(self.counts[lo:]), self.total)

    def tail_at_least(self, t: int) -> Fraction:
        """P(isolates >= t)."""
        return self.tail(t - 1)

    def mode(self) -> int:
        best = max(self.counts)
        return self.counts.index(best)


def isolate_distribution(n: int, f: int) -> IsolateDistribution:
    """Exact law of the isolate count given n languages in f families.

    Streams the no-singleton triangle up to row n, keeping only the entries
    T(n - i, f - i) that the counts need.
    """
    if not 1 <= f <= n:
        raise ValueError(f"need 1 <= f <= n, got n={n}, f={f}")
    counts = [0] * (f + 1)
    for m, row in enumerate(associated_stirling_rows(n)):
        i = n - m
        k = f - i
        if 0 <= i <= f and 0 <= k < len(row):
            counts[i] = comb(n, i) * row[k]
    return IsolateDistribution(n, f, tuple(counts), sum(counts))
