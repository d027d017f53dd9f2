"""Recompute every published figure for the language-classification problem
and compare it with the value as printed."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import floor
from typing import Callable

from .combinatorics import bell, bell_via_multiset, classifications_for_shape, integer_partitions
from .egf import base_series, count_at, egf_exp
from .render import format_percent, format_significant
from .stats import family_distribution, isolate_distribution, no_isolate_count

PUBLISHED_B25 = 4749027089305918018


@dataclass(frozen=True)
class Claim:
    name: str
    cited: str
    computed: str
    passed: bool
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: computed {self.computed}; cited {self.cited}"
        return f"{text}  [{self.note}]" if self.note else text


def cited_percent_matches(value: Fraction, cited: str) -> tuple[str, bool]:
    """Render ``value`` (a probability) at the cited precision.

    Passes when the value rounded to the cited last place is within one unit
    of the cited digits. ``cited`` is a percent in Decimal syntax, e.g.
    ``"37.1"`` or ``"0.238E-843"``.
    """
    c = Decimal(cited)
    sign, digits, exponent = c.as_tuple()
    scaled = value * 100 / Fraction(10) ** exponent
    rounded = floor(scaled + Fraction(1, 2))
    cited_int = int("".join(map(str, digits)))
    return format_percent(value, len(digits)), abs(rounded - cited_int) <= 1


def _exact_claim(name: str, computed: int, cited: int) -> Claim:
    return Claim(name, f"{cited:,}", f"{computed:,}", computed == cited)


def run_claims(n_africa: int = 1500, bell_override: dict[int, int] | None = None) -> list[Claim]:
    overrides = bell_override or {}

    def bell_of(n: int, method: str = "recurrence") -> int:
        return overrides.get(n, bell(n, method))

    claims: list[Claim] = []
    add = claims.append

    add(_exact_claim("integer partitions of 8", sum(1 for _ in integer_partitions(8)), 22))
    add(_exact_claim("integer partitions of 25", sum(1 for _ in integer_partitions(25)), 1958))
    add(_exact_claim("classifications of shape 5+2+1", classifications_for_shape((5, 2, 1)), 168))
    add(_exact_claim("classifications of shape 4+2+2", classifications_for_shape((4, 2, 2)), 210))
    add(_exact_claim("B(8) by summing over shapes", bell_via_multiset(8), 4140))
    add(_exact_claim("B(8)", bell_of(8), 4140))
    for method in ("recurrence", "row_sum", "egf"):
        add(_exact_claim(f"B(25) [{method}]", bell_of(25, method), 4638590332229999353))
    egf_b25 = count_at(egf_exp(base_series("exp_minus_1", 25)), 25)
    add(_exact_claim("25! [x^25] exp(exp(x)-1)", egf_b25, 4638590332229999353))
    b25 = bell_of(25)
    add(
        Claim(
            "published 25-language figure is wrong",
            f"{PUBLISHED_B25:,} (erroneous)",
            f"{b25:,}",
            b25 != PUBLISHED_B25,
            f"off by {PUBLISHED_B25 - b25:+,}",
        )
    )

    dist = family_distribution(650)
    rendered, ok = cited_percent_matches(dist.range_mass(1, 3), "0.238E-843")
    add(
        Claim(
            "P(at most 3 families | n=650)",
            "0.238×10⁻⁸⁴³ %",
            rendered,
            ok,
            "cited digits are truncated; rounding gives the last digit 9",
        )
    )
    for (a, b), cited in zip(
        [(50, 110), (111, 120), (121, 130), (131, 140), (141, 150)],
        ["0.0000565", "0.56", "37.1", "58.8", "3.5"],
    ):
        rendered, ok = cited_percent_matches(dist.range_mass(a, b), cited)
        add(Claim(f"P({a} <= families <= {b} | n=650)", f"{cited}%", rendered, ok))
    below = dist.range_mass(1, 99)
    add(
        Claim(
            "P(fewer than 100 families | n=650) is near zero",
            "near 0%",
            format_percent(below),
            below < Fraction(1, 10**6),
        )
    )
    bulk = dist.range_mass(121, 150)
    add(
        Claim(
            "P(121 <= families <= 150 | n=650) is almost all",
            "almost 100%",
            format_percent(bulk),
            bulk > Fraction(99, 100),
        )
    )

    add(_exact_claim("no-isolate classifications of 8", no_isolate_count(8), 715))
    for n, cited in [(8, "17"), (25, "8.75"), (200, "1.93"), (500, "0.927"), (650, "0.747")]:
        p = Fraction(no_isolate_count(n), bell_of(n, "row_sum"))
        rendered, ok = cited_percent_matches(p, cited)
        add(Claim(f"P(no isolates | n={n})", f"{cited}%", rendered, ok))

    for f, lo, hi, cited_mean, t in [(150, 8.5, 9.5, "about 9", 14), (180, 19.0, 20.0, "roughly 19.5", 26)]:
        iso = isolate_distribution(650, f)
        mean = iso.mean()
        add(
            Claim(
                f"mean isolates | n=650, f={f}",
                cited_mean,
                format_significant(mean, 4),
                Fraction(lo) <= mean <= Fraction(hi),
            )
        )
        at_least = iso.tail_at_least(t)
        add(
            Claim(
                f"P(isolates >= {t} | n=650, f={f})",
                f"nearly 5% have more than {t}",
                format_percent(at_least),
                Fraction(4, 100) <= at_least <= Fraction(6, 100),
                f"strict P(isolates > {t}) = {format_percent(iso.tail(t))}",
            )
        )

    mode_1000 = family_distribution(1000).mode()[0]
    add(Claim("most likely family count | n=1000", "in [180, 200]", str(mode_1000), 180 <= mode_1000 <= 200))

    africa = family_distribution(n_africa)
    mode_africa = africa.mode()[0]
    add(
        Claim(
            f"most likely family count | n={n_africa}",
            "a few hundred (> 200)",
            str(mode_africa),
            mode_africa > 200,
        )
    )
    few = africa.range_mass(1, 4)
    add(
        Claim(
            f"P(at most 4 families | n={n_africa})",
            "< 1e-1000",
            format_percent(few),
            few < Fraction(1, 10**1000),
        )
    )
    return claims


def reproduce_paper(
    n_africa: int = 1500,
    bell_override: dict[int, int] | None = None,
    emit: Callable[[str], None] = print,
) -> int:
    """Print one PASS/FAIL line per claim; return 0 only if all pass."""
    claims = run_claims(n_africa, bell_override)
    for claim in claims:
        emit(claim.line())
    failed = sum(not c.passed for c in claims)
    emit(f"{len(claims) - failed}/{len(claims)} claims reproduced")
    return 1 if failed else 0
