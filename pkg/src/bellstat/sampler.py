"""Seeded, exactly uniform sampling of set partitions.

The block holding the smallest unassigned element has size j with probability
C(m-1, j-1) B(m-j) / B(m), where m elements remain. The choice is made by one
integer draw u in [0, B(m)) compared against running integer partial sums of
those weights, so no floating point is involved and the law is exact.

Streams come from :class:`random.Random` (MT19937). Large sample counts are
split into fixed-size batches whose seeds derive from (seed, batch index), so
a summary does not depend on how many worker processes ran it.
"""

from __future__ import annotations

import hashlib
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import sqrt
from statistics import NormalDist
from typing import Callable, Sequence

from .combinatorics import bell_numbers

PRNG = "python-random-mt19937"
BATCH_SIZE = 10_000


@dataclass(frozen=True)
class PartitionSample:
    """``block_assignment[e - 1]`` is the block id of element e.

    Blocks are numbered 1..k in order of their smallest element.
    """

    n: int
    block_assignment: tuple[int, ...]

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = []
        for element, b in enumerate(self.block_assignment, start=1):
            if b > len(out):
                out.append([])
            out[b - 1].append(element)
        return out

    @property
    def families(self) -> int:
        return max(self.block_assignment, default=0)

    @property
    def isolates(self) -> int:
        return sum(1 for c in Counter(self.block_assignment).values() if c == 1)


def draw_block_size(m: int, bells: Sequence[int], rng: random.Random) -> int:
    """Size of the block containing the smallest of ``m`` remaining elements."""
    u = rng.randrange(bells[m])
    acc = 0
    c = 1  # C(m-1, j-1)
    for j in range(1, m + 1):
        acc += c * bells[m - j]
        if u < acc:
            return j
        c = c * (m - j) // j
    raise AssertionError("block-size weights do not sum to B(m)")


def sample_block_sizes(n: int, rng: random.Random, bells: Sequence[int] | None = None) -> list[int]:
    """Block sizes of a uniform partition, in order of smallest element."""
    if bells is None:
        bells = bell_numbers(n).values
    sizes = []
    m = n
    while m:
        j = draw_block_size(m, bells, rng)
        sizes.append(j)
        m -= j
    return sizes


def sample_partition(n: int, rng: random.Random, bells: Sequence[int] | None = None) -> PartitionSample:
    if n < 1:
        raise ValueError("n must be at least 1")
    if bells is None:
        bells = bell_numbers(n).values
    assignment = [0] * n
    remaining = list(range(n))
    block = 0
    while remaining:
        block += 1
        j = draw_block_size(len(remaining), bells, rng)
        first, rest = remaining[0], remaining[1:]
        members = rng.sample(rest, j - 1)
        assignment[first] = block
        for e in members:
            assignment[e] = block
        chosen = set(members)
        remaining = [e for e in rest if e not in chosen]
    return PartitionSample(n, tuple(assignment))


def proportion_interval(successes: int, total: int, level: float = 0.95) -> tuple[float, float, float]:
    """Normal-approximation interval (estimate, low, high) for a proportion."""
    if total <= 0:
        raise ValueError("need at least one sample")
    z = NormalDist().inv_cdf(0.5 + level / 2)
    p = successes / total
    half = z * sqrt(p * (1 - p) / total)
    return p, p - half, p + half


def _histogram_mean_interval(hist: dict[int, int], level: float) -> tuple[float, float, float]:
    total = sum(hist.values())
    if total <= 0:
        raise ValueError("need at least one sample")
    mean = sum(k * c for k, c in hist.items()) / total
    var = sum(c * (k - mean) ** 2 for k, c in hist.items()) / max(total - 1, 1)
    half = NormalDist().inv_cdf(0.5 + level / 2) * sqrt(var / total)
    return mean, mean - half, mean + half


@dataclass(frozen=True)
class SampleSummary:
    n: int
    samples: int
    family_histogram: dict[int, int]
    isolate_histogram: dict[int, int]
    seed: int | None = None
    prng: str = PRNG
    batch_size: int = BATCH_SIZE

    def merge(self, other: "SampleSummary") -> "SampleSummary":
        if other.n != self.n:
            raise ValueError("cannot merge summaries for different n")
        fam = Counter(self.family_histogram)
        fam.update(other.family_histogram)
        iso = Counter(self.isolate_histogram)
        iso.update(other.isolate_histogram)
        return SampleSummary(
            self.n,
            self.samples + other.samples,
            dict(sorted(fam.items())),
            dict(sorted(iso.items())),
            self.seed,
            self.prng,
            self.batch_size,
        )

    def family_fraction(self, event: Callable[[int], bool], level: float = 0.95):
        hits = sum(c for k, c in self.family_histogram.items() if event(k))
        return proportion_interval(hits, self.samples, level)

    def isolate_fraction(self, event: Callable[[int], bool], level: float = 0.95):
        hits = sum(c for i, c in self.isolate_histogram.items() if event(i))
        return proportion_interval(hits, self.samples, level)

    def family_mean_interval(self, level: float = 0.95):
        return _histogram_mean_interval(self.family_histogram, level)

    def isolate_mean_interval(self, level: float = 0.95):
        return _histogram_mean_interval(self.isolate_histogram, level)


def batch_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _run_batch(n: int, count: int, sub_seed: int) -> tuple[Counter, Counter]:
    rng = random.Random(sub_seed)
    bells = bell_numbers(n).values
    fam: Counter = Counter()
    iso: Counter = Counter()
    for _ in range(count):
        sizes = sample_block_sizes(n, rng, bells)
        fam[len(sizes)] += 1
        iso[sizes.count(1)] += 1
    return fam, iso


def summarize(
    n: int,
    count: int,
    seed: int,
    batch_size: int = BATCH_SIZE,
    workers: int = 1,
) -> SampleSummary:
    """Family and isolate histograms over ``count`` uniform partitions.

    Only block sizes are drawn: both statistics are functions of the size
    multiset, whose law under uniform sampling does not depend on which
    elements fill each block.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if count < 1:
        raise ValueError("count must be positive")
    jobs = []
    start = 0
    index = 0
    while start < count:
        size = min(batch_size, count - start)
        jobs.append((n, size, batch_seed(seed, index)))
        start += size
        index += 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_batch, *zip(*jobs)))
    else:
        results = [_run_batch(*job) for job in jobs]
    fam: Counter = Counter()
    iso: Counter = Counter()
    for f, i in results:
        fam.update(f)
        iso.update(i)
    return SampleSummary(
        n, count, dict(sorted(fam.items())), dict(sorted(iso.items())), seed, PRNG, batch_size
    )
