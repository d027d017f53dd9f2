"""Exact set-partition statistics: Stirling and Bell numbers, isolate counts,
and probabilities under the uniform distribution on set partitions."""

__version__ = "0.1.0"

from .combinatorics import (
    AssociatedStirlingTable,
    BellSequence,
    IntegerPartition,
    StirlingTable,
    associated_stirling,
    bell,
    bell_numbers,
    bell_via_multiset,
    binomial,
    classifications_for_shape,
    integer_partitions,
    stirling2,
    stirling_row,
)
from .egf import TruncatedEGF, base_series, count_at, egf_add, egf_exp, egf_mul, egf_pow
from .render import ProbabilityRendering, render_probability
from .stats import (
    FamilyDistribution,
    IsolateDistribution,
    family_distribution,
    family_isolate_count,
    family_mode,
    isolate_distribution,
    no_isolate_count,
    prob_family_range,
    prob_no_isolates,
)

__all__ = [
    "AssociatedStirlingTable",
    "BellSequence",
    "FamilyDistribution",
    "IntegerPartition",
    "IsolateDistribution",
    "ProbabilityRendering",
    "StirlingTable",
    "TruncatedEGF",
    "associated_stirling",
    "base_series",
    "bell",
    "bell_numbers",
    "bell_via_multiset",
    "binomial",
    "classifications_for_shape",
    "count_at",
    "egf_add",
    "egf_exp",
    "egf_mul",
    "egf_pow",
    "family_distribution",
    "family_isolate_count",
    "family_mode",
    "integer_partitions",
    "isolate_distribution",
    "no_isolate_count",
    "prob_family_range",
    "prob_no_isolates",
    "render_probability",
    "stirling2",
    "stirling_row",
]
