"""Arbitrary-precision kernels: binomials, integer partitions, Stirling numbers
of the second kind, Bell numbers and the no-singleton (associated) Stirling
numbers.

Counts are plain Python ints. Every triangle is built row by row; the
``*_rows`` generators keep only the rows the recurrence needs, so a single
row at n=1500 costs O(n) integers of memory rather than O(n^2).
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Sequence

SOFT_CAP = 5000

BELL_METHODS = ("recurrence", "row_sum", "egf")
STIRLING_METHODS = ("recurrence", "explicit")


class LargeInputWarning(UserWarning):
    """Raised (as a warning) for inputs above the soft cap."""


def check_size(n: int, cap: int = SOFT_CAP) -> None:
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > cap:
        warnings.warn(
            f"n={n} exceeds the soft cap {cap}; tables hold O(n) numbers with "
            "O(n log n) digits each and may take a long time to build",
            LargeInputWarning,
            stacklevel=3,
        )


def binomial(n: int, k: int) -> int:
    """C(n, k), and 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if k > n:
        return 0
    return comb(n, k)


@dataclass(frozen=True)
class IntegerPartition:
    """A weakly decreasing tuple of positive parts; ``n`` is their sum."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = self.parts
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[j] < parts[j + 1] for j in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "+".join(map(str, self.parts)) if self.parts else "0"


def integer_partitions(n: int) -> Iterator[IntegerPartition]:
    """Yield every partition of ``n`` once, in decreasing lexicographic order.

    Starts at ``(n,)`` and ends at ``(1, ..., 1)``. ``n == 0`` yields the
    empty partition. Iterative (Zoghbi-Stojmenovic ZS1), so there is no
    recursion limit on n.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        yield IntegerPartition(())
        return
    x = [1] * (n + 1)
    x[1] = n
    m = h = 1
    yield IntegerPartition(tuple(x[1 : m + 1]))
    while x[1] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield IntegerPartition(tuple(x[1 : m + 1]))


def classifications_for_shape(p: IntegerPartition | Sequence[int]) -> int:
    """Number of set partitions of an n-set whose block sizes are ``p``.

    The multinomial n!/prod(part!) overcounts by the permutations of equal
    parts, so it is further divided by prod(multiplicity!).
    """
    parts = p.parts if isinstance(p, IntegerPartition) else tuple(p)
    denom = 1
    for part in parts:
        denom *= factorial(part)
    for mult in Counter(parts).values():
        denom *= factorial(mult)
    return factorial(sum(parts)) // denom


def bell_via_multiset(n: int) -> int:
    """B(n) as a sum over block-size shapes.

    Enumerates all p(n) integer partitions, so this is only an oracle for
    small n (p(60) is already close to a million).
    """
    return sum(classifications_for_shape(p) for p in integer_partitions(n))


# -- Stirling numbers of the second kind ------------------------------------


def stirling_rows(cap: int) -> Iterator[tuple[int, ...]]:
    """Yield rows S(m, 0..m) for m = 0..cap, keeping one previous row."""
    check_size(cap)
    row: tuple[int, ...] = (1,)
    yield row
    for m in range(1, cap + 1):
        prev = row
        new = [0] * (m + 1)
        for k in range(1, m):
            new[k] = k * prev[k] + prev[k - 1]
        new[m] = 1
        row = tuple(new)
        yield row


@lru_cache(maxsize=8)
def stirling_row(n: int) -> tuple[int, ...]:
    """S(n, 0..n), built in streaming mode."""
    row: tuple[int, ...] = ()
    for row in stirling_rows(n):
        pass
    return row


def stirling_explicit(n: int, k: int) -> int:
    """S(n, k) from the alternating sum over surjections.

    The sum counts surjections onto k labelled blocks, so it must be
    divisible by k!; a remainder means the arithmetic is broken.
    """
    total = sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1))
    q, r = divmod(total, factorial(k))
    if r:
        raise ArithmeticError(f"alternating sum for S({n},{k}) not divisible by {k}!")
    return q


def stirling2(n: int, k: int, method: str = "recurrence") -> int:
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if method == "recurrence":
        if k > n:
            return 0
        return stirling_row(n)[k]
    if method == "explicit":
        return stirling_explicit(n, k)
    raise ValueError(f"unknown stirling2 method {method!r}; expected one of {STIRLING_METHODS}")


class StirlingTable:
    """Fully retained triangle S(0..cap, .).

    Opt-in: at cap=1500 this holds about 1.1M integers with thousands of
    digits. Use :func:`stirling_row` when only one row is needed.
    """

    def __init__(self, cap: int):
        self.cap = cap
        self.rows: tuple[tuple[int, ...], ...] = tuple(stirling_rows(cap))

    def __getitem__(self, nk: tuple[int, int]) -> int:
        n, k = nk
        if not 0 <= n <= self.cap:
            raise IndexError(f"n={n} outside table cap {self.cap}")
        if k < 0:
            raise IndexError("k must be nonnegative")
        return self.rows[n][k] if k <= n else 0

    def row(self, n: int) -> tuple[int, ...]:
        return self.rows[n]

    def bell(self, n: int) -> int:
        return sum(self.rows[n])


# -- Bell numbers -------------------------------------------------------------


@dataclass(frozen=True)
class BellSequence:
    cap: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]


@lru_cache(maxsize=4)
def bell_numbers(cap: int) -> BellSequence:
    """B(0..cap) by B(m+1) = sum_k C(m, k) B(k).

    The binomial row is carried forward by Pascal's rule instead of being
    recomputed for every m.
    """
    check_size(cap)
    values = [1]
    binrow = [1]
    for m in range(cap):
        values.append(sum(c * b for c, b in zip(binrow, values)))
        binrow = [1] + [binrow[j] + binrow[j + 1] for j in range(m)] + [1]
    return BellSequence(cap, tuple(values))


def bell(n: int, method: str = "recurrence") -> int:
    """B(n) by the binomial recurrence, a Stirling row sum, or the EGF.

    The ``egf`` route expands exp(e^x - 1) over exact rationals and is cubic
    in n; it exists for cross-checking, not for n in the hundreds.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if method == "recurrence":
        return bell_numbers(n)[n]
    if method == "row_sum":
        return sum(stirling_row(n))
    if method == "egf":
        from .egf import base_series, count_at, egf_exp

        return count_at(egf_exp(base_series("exp_minus_1", n)), n)
    raise ValueError(f"unknown bell method {method!r}; expected one of {BELL_METHODS}")


# -- associated Stirling numbers (blocks of size >= 2) ------------------------


def associated_stirling_rows(cap: int) -> Iterator[tuple[int, ...]]:
    """Yield rows T(m, 0..m//2) for m = 0..cap.

    T(m, k) = k T(m-1, k) + (m-1) T(m-2, k-1): element m either joins one of
    the k blocks of a no-singleton partition of the rest, or pairs with one of
    the other m-1 elements to start a block that it then never leaves alone.
    Only the two previous rows are kept.
    """
    check_size(cap)
    older: tuple[int, ...] = (1,)
    yield older
    if cap == 0:
        return
    prev: tuple[int, ...] = (0,)
    yield prev
    for m in range(2, cap + 1):
        new = [0] * (m // 2 + 1)
        for k in range(1, m // 2 + 1):
            stay = k * prev[k] if k < len(prev) else 0
            pair = (m - 1) * older[k - 1] if k - 1 < len(older) else 0
            new[k] = stay + pair
        older, prev = prev, tuple(new)
        yield prev


@lru_cache(maxsize=8)
def associated_stirling_row(n: int) -> tuple[int, ...]:
    row: tuple[int, ...] = ()
    for row in associated_stirling_rows(n):
        pass
    return row


def associated_stirling(n: int, k: int) -> int:
    """Partitions of an n-set into k blocks, none of them a singleton."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if 2 * k > n:
        return 0
    return associated_stirling_row(n)[k]


class AssociatedStirlingTable:
    def __init__(self, cap: int):
        self.cap = cap
        self.rows: tuple[tuple[int, ...], ...] = tuple(associated_stirling_rows(cap))

    def __getitem__(self, nk: tuple[int, int]) -> int:
        n, k = nk
        if not 0 <= n <= self.cap:
            raise IndexError(f"n={n} outside table cap {self.cap}")
        row = self.rows[n]
        return row[k] if 0 <= k < len(row) else 0

    def row_sum(self, n: int) -> int:
        return sum(self.rows[n])
