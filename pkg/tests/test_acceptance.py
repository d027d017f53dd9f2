"""Exit criteria. Each test records one PASS/FAIL line (summarized at the end
of the run); tolerances are fixed here and nowhere else."""

import io
import random
import time
from collections import Counter
from decimal import Decimal
from fractions import Fraction
from math import comb, factorial

import pytest
from scipy.stats import chisquare

from bellstat.cli import run
from bellstat.combinatorics import (
    associated_stirling_row,
    bell,
    bell_numbers,
    bell_via_multiset,
    stirling_explicit,
    stirling_row,
)
from bellstat.egf import base_series, count_at, egf_pow
from bellstat.sampler import sample_partition, summarize
from bellstat.stats import (
    family_distribution,
    family_isolate_count,
    family_mode,
    isolate_distribution,
    no_isolate_count,
    prob_family_range,
    prob_no_isolates,
)
from oracles import enumerate_stats, set_partitions

B25 = 4638590332229999353
PUBLISHED_B25 = 4749027089305918018


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out, stderr=io.StringIO())
    return code, out.getvalue().strip()


def test_c1_bell_values(criterion):
    bell_numbers.cache_clear()
    start = time.perf_counter()
    r8 = cli("bell", "--n", "8", "--no-cache")
    r25 = cli("bell", "--n", "25", "--no-cache")
    elapsed = time.perf_counter() - start
    ok = r8 == (0, "4140") and r25 == (0, str(B25)) and int(r25[1]) != PUBLISHED_B25 and elapsed < 1
    criterion("C1 bell(8)=4140, bell(25) exact, != published 25 value, < 1 s", ok, f"{elapsed:.3f}s")


def test_c2_bell_methods_agree(criterion):
    start = time.perf_counter()
    methods_ok = all(
        len({bell(n, "recurrence"), bell(n, "row_sum"), bell(n, "egf"), bell_via_multiset(n)}) == 1
        for n in range(26)
    )
    brute_ok = all(bell(n) == sum(1 for _ in set_partitions(n)) for n in range(13))
    elapsed = time.perf_counter() - start
    criterion(
        "C2 three Bell methods + multiset agree n<=25; brute force n<=12; < 30 s",
        methods_ok and brute_ok and elapsed < 30,
        f"{elapsed:.1f}s",
    )


def test_c3_egf_stirling_identity(criterion):
    N = 40
    unit = base_series("exp_minus_1", N)
    bad = []
    for k in range(N + 1):
        power = egf_pow(unit, k)
        for n in range(k, N + 1):
            if count_at(power, n) != factorial(k) * stirling_row(n)[k]:
                bad.append((n, k))
        for n in range(k):
            if count_at(power, n) != 0:
                bad.append((n, k))
    criterion("C3 k!*S(n,k) = n![x^n](e^x-1)^k for 0<=k<=n<=40", not bad, f"mismatches {bad[:5]}")


TABLE_650 = [((50, 110), 3, "0.0000565%"), ((111, 120), 2, "0.56%"), ((121, 130), 3, "37.1%"),
             ((131, 140), 3, "58.8%"), ((141, 150), 2, "3.5%")]


def test_c4_family_range_table(criterion):
    start = time.perf_counter()
    got = [prob_family_range(650, a, b, digits).percent for (a, b), digits, _ in TABLE_650]
    elapsed = time.perf_counter() - start
    want = [w for _, _, w in TABLE_650]
    criterion("C4a n=650 range table renders as published; < 2 min", got == want and elapsed < 120,
              f"{got} in {elapsed:.2f}s")


def test_c4_at_most_three_families(criterion):
    r = prob_family_range(650, 1, 3, digits=3)
    criterion("C4b P(<=3 families | 650) renders 0.238×10⁻⁸⁴³ % at 3 digits",
              r.percent == "0.238×10⁻⁸⁴³ %", f"rendered {r.percent}; exact value {r.scientific} as probability")


def _within_last_digit(rendered_percent: str, cited: str) -> bool:
    got = Decimal(rendered_percent.rstrip("%"))
    want = Decimal(cited)
    return abs(got - want) <= Decimal(1).scaleb(want.as_tuple().exponent)


def test_c5_no_isolates(criterion):
    cited = [(8, "17"), (25, "8.75"), (200, "1.93"), (500, "0.927"), (650, "0.747")]
    got = {n: prob_no_isolates(n, len(Decimal(c).as_tuple().digits)).percent for n, c in cited}
    ok = no_isolate_count(8) == 715 and all(_within_last_digit(got[n], c) for n, c in cited)
    criterion("C5 A(8)=715; no-isolate probabilities match published rounding (+-1 last digit)", ok, str(got))


def test_c6_isolate_means(criterion):
    m150 = isolate_distribution(650, 150).mean()
    m180 = isolate_distribution(650, 180).mean()
    ok = Fraction(17, 2) <= m150 <= Fraction(19, 2) and 19 <= m180 <= 20
    criterion("C6a mean isolates (650,150) in [8.5,9.5], (650,180) in [19,20]", ok,
              f"{float(m150):.4f}, {float(m180):.4f}")


def test_c6_isolate_tails(criterion):
    t150 = isolate_distribution(650, 150).tail(14)
    t180 = isolate_distribution(650, 180).tail(26)
    lo, hi = Fraction(4, 100), Fraction(6, 100)
    criterion("C6b tail(14) at (650,150) and tail(26) at (650,180) in [4%,6%]",
              lo <= t150 <= hi and lo <= t180 <= hi,
              f"P(i>14)={float(t150):.4%}, P(i>26)={float(t180):.4%}")


def test_c7_large_n(criterion):
    stirling_row.cache_clear()
    start = time.perf_counter()
    m1000 = family_mode(1000)
    d1500 = family_distribution(1500)
    m1500 = d1500.mode()[0]
    few = d1500.range_mass(1, 4)
    elapsed = time.perf_counter() - start
    ok = 180 <= m1000 <= 200 and m1500 > 200 and few < Fraction(1, 10**1000) and elapsed < 600
    criterion("C7 mode(1000) in [180,200]; mode(1500) > 200; P(k<=4 | 1500) < 1e-1000; < 10 min", ok,
              f"modes {m1000}, {m1500}; {elapsed:.1f}s")


def test_c8_properties(criterion):
    failures = []
    for n in range(1, 41):
        d = family_distribution(n)
        if sum(d.mass(k) for k in range(n + 1)) != 1:
            failures.append(("family normalization", n))
        a = [sum(associated_stirling_row(m)) for m in range(n + 1)]
        if bell(n) != sum(comb(n, i) * a[n - i] for i in range(n + 1)):
            failures.append(("complementation", n))
        for f in range(1, n + 1):
            if sum(family_isolate_count(n, f, i) for i in range(f + 1)) != stirling_row(n)[f]:
                failures.append(("isolate sum", n, f))
            iso = isolate_distribution(n, f)
            if sum(iso.prob(i) for i in range(f + 1)) != 1:
                failures.append(("isolate normalization", n, f))
    for n in range(0, 61):
        for k in range(n + 1):
            total = sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1))
            if total % factorial(k) or stirling_explicit(n, k) != total // factorial(k):
                failures.append(("divisibility", n, k))
    for n in range(1, 11):
        s = enumerate_stats(n)
        d = family_distribution(n)
        best = max(s["by_k"].values())
        if d.mode()[0] != min(k for k, c in s["by_k"].items() if c == best):
            failures.append(("brute mode", n))
        for a in range(1, n + 1):
            for b in range(a, n + 1):
                want = Fraction(sum(c for k, c in s["by_k"].items() if a <= k <= b), s["total"])
                if d.range_mass(a, b) != want:
                    failures.append(("brute range", n, a, b))
        if prob_no_isolates(n).exact != Fraction(s["no_isolates"], s["total"]):
            failures.append(("brute no-isolates", n))
        for f in range(1, n + 1):
            tally = {i: s["by_k_iso"][f, i] for i in range(f + 1)}
            want = Fraction(sum(i * c for i, c in tally.items()), sum(tally.values()))
            if isolate_distribution(n, f).mean() != want:
                failures.append(("brute mean isolates", n, f))
    criterion("C8 normalization, complementation, isolate sums, divisibility, brute force n<=10",
              not failures, str(failures[:5]))


def _canonical(sample):
    return tuple(b - 1 for b in sample.block_assignment)


@pytest.mark.slow
def test_c9_sampler(criterion):
    pvalues = {}
    for n in range(2, 6):
        rng = random.Random(1000 + n)
        freq = Counter(_canonical(sample_partition(n, rng)) for _ in range(100_000))
        parts = list(set_partitions(n))
        pvalues[n] = chisquare([freq[p] for p in parts]).pvalue
    big = summarize(8, 1_000_000, seed=8)
    p0 = big.isolate_histogram.get(0, 0) / big.samples
    exact = 715 / 4140
    repeat = summarize(8, 20_000, seed=8, batch_size=5_000) == summarize(8, 20_000, seed=8, batch_size=5_000)
    first = [sample_partition(10, random.Random(3)) for _ in range(5)]
    again = [sample_partition(10, random.Random(3)) for _ in range(5)]
    ok = all(p > 0.001 for p in pvalues.values()) and abs(p0 - exact) <= 0.002 and repeat and first == again
    criterion("C9 chi-squared n<=5 at 1e5 (p>0.001); P(no isolate | 8) within 0.2pp at 1e6; deterministic",
              ok, f"p-values {{{', '.join(f'{n}: {p:.3f}' for n, p in pvalues.items())}}}; "
              f"empirical {p0:.5f} vs {exact:.5f}")
