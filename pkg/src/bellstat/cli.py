"""Command-line front end.

Exit status: 0 on success, 1 when a computation fails (or a reproduced figure
does not match), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import __version__
from .cache import TableCache
from .combinatorics import (
    BELL_METHODS,
    SOFT_CAP,
    STIRLING_METHODS,
    bell,
    bell_numbers,
    classifications_for_shape,
    integer_partitions,
    stirling2,
    stirling_row,
)
from .render import format_significant, int_to_decimal, render_probability
from .reproduce import reproduce_paper
from .sampler import summarize
from .stats import (
    COUNT_METHODS,
    FamilyDistribution,
    IsolateDistribution,
    family_isolate_count,
    isolate_distribution,
    no_isolate_count,
)

# Documented shape of ``--format json`` output.
OUTPUT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["query", "result", "exact", "rendered", "meta"],
    "additionalProperties": False,
    "properties": {
        "query": {
            "type": "object",
            "required": ["command", "params"],
            "properties": {"command": {"type": "string"}, "params": {"type": "object"}},
        },
        "result": {"type": "object"},
        "exact": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["numerator", "denominator"],
                    "additionalProperties": False,
                    "properties": {
                        "numerator": {"type": "string", "pattern": "^-?[0-9]+$"},
                        "denominator": {"type": "string", "pattern": "^[1-9][0-9]*$"},
                    },
                },
            ]
        },
        "rendered": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["scientific", "percent", "digits"],
                    "properties": {
                        "scientific": {"type": "string"},
                        "percent": {"type": "string"},
                        "digits": {"type": "integer", "minimum": 1},
                    },
                },
            ]
        },
        "meta": {
            "type": "object",
            "required": ["version", "method"],
            "properties": {
                "version": {"type": "string"},
                "method": {"type": ["string", "null"]},
                "cache_hit": {"type": ["boolean", "null"]},
                "seed": {"type": ["integer", "null"]},
                "prng": {"type": "string"},
                "elapsed_seconds": {"type": "number"},
            },
        },
    },
}


@dataclass
class Output:
    result: dict[str, Any]
    plain: list[str]
    header: list[str] | None = None
    rows: list[list[Any]] = field(default_factory=list)
    probability: Fraction | None = None
    method: str | None = None
    extra_meta: dict[str, Any] = field(default_factory=dict)


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cache = None if args.no_cache else TableCache(args.cache_dir)
        self.cache_hit: bool | None = None

    def _cached(self, kind: str, n: int, compute: Callable[[], Sequence[int]]) -> tuple[int, ...]:
        if self.cache is None:
            return tuple(compute())
        values, hit = self.cache.get_or_compute(kind, n, compute)
        self.cache_hit = hit if self.cache_hit is None else (self.cache_hit and hit)
        return values

    def stirling_row(self, n: int) -> tuple[int, ...]:
        return self._cached("stirling-row", n, lambda: stirling_row(n))

    def bell_numbers(self, n: int) -> tuple[int, ...]:
        return self._cached("bell", n, lambda: bell_numbers(n).values)

    def family_distribution(self, n: int) -> FamilyDistribution:
        if n < 1:
            raise ValueError("need at least one language to classify")
        row = self.stirling_row(n)
        return FamilyDistribution(n, row, sum(row))


def _table(header: list[str], rows: list[list[Any]]) -> list[str]:
    return ["\t".join(header)] + ["\t".join(map(str, r)) for r in rows]


def _fraction_dict(x: Fraction) -> dict[str, str]:
    return {"numerator": int_to_decimal(x.numerator), "denominator": int_to_decimal(x.denominator)}


def _method(ctx: Context, allowed: Sequence[str], default: str) -> str:
    method = ctx.args.method or default
    if method not in allowed:
        raise UsageError(f"--method must be one of {', '.join(allowed)} for {ctx.args.command}")
    return method


class UsageError(Exception):
    pass


# -- subcommands --------------------------------------------------------------


def cmd_bell(ctx: Context) -> Output:
    n = ctx.args.n
    method = _method(ctx, BELL_METHODS, "recurrence")
    if method == "recurrence":
        value = ctx.bell_numbers(n)[n]
    elif method == "row_sum":
        value = sum(ctx.stirling_row(n))
    else:
        value = bell(n, "egf")
    s = int_to_decimal(value)
    return Output({"n": n, "bell": s}, [s], ["n", "bell"], [[n, s]], method=method)


def cmd_stirling(ctx: Context) -> Output:
    n, k = ctx.args.n, ctx.args.k
    method = _method(ctx, STIRLING_METHODS, "recurrence")
    if k is not None:
        if method == "recurrence":
            row = ctx.stirling_row(n)
            value = row[k] if k <= n else 0
        else:
            value = stirling2(n, k, "explicit")
        s = int_to_decimal(value)
        return Output({"n": n, "k": k, "value": s}, [s], ["n", "k", "value"], [[n, k, s]], method=method)
    if method == "recurrence":
        row = ctx.stirling_row(n)
    else:
        row = tuple(stirling2(n, j, "explicit") for j in range(n + 1))
    values = [int_to_decimal(v) for v in row]
    rows = [[j, v] for j, v in enumerate(values)]
    header = ["k", "count"]
    return Output({"n": n, "row": values}, _table(header, rows), header, rows, method=method)


def cmd_partitions(ctx: Context) -> Output:
    n = ctx.args.n
    parts = []
    rows = []
    total = 0
    for p in integer_partitions(n):
        c = classifications_for_shape(p)
        total += c
        parts.append({"parts": list(p.parts), "classifications": int_to_decimal(c)})
        rows.append([str(p), int_to_decimal(c)])
    header = ["partition", "classifications"]
    result = {"n": n, "count": len(parts), "total": int_to_decimal(total), "partitions": parts}
    return Output(result, _table(header, rows), header, rows, method="multiset")


def cmd_family_dist(ctx: Context) -> Output:
    args = ctx.args
    n = args.n
    dist = ctx.family_distribution(n)
    if args.range_from is None and args.range_to is None:
        rows = []
        entries = []
        for k in range(1, n + 1):
            r = render_probability(dist.mass(k), args.digits)
            count = int_to_decimal(dist.counts[k])
            rows.append([k, count, r.percent])
            entries.append({"k": k, "count": count, "percent": r.percent, "scientific": r.scientific})
        header = ["k", "count", "probability"]
        result = {"n": n, "total": int_to_decimal(dist.total), "distribution": entries}
        return Output(result, _table(header, rows), header, rows, method="recurrence")
    a = 1 if args.range_from is None else args.range_from
    b = n if args.range_to is None else args.range_to
    if a > b:
        raise ValueError(f"empty range: --from {a} > --to {b}")
    p = dist.range_mass(a, b)
    r = render_probability(p, args.digits)
    result = {
        "n": n,
        "from": a,
        "to": b,
        "count": int_to_decimal(dist.range_count(a, b)),
        "total": int_to_decimal(dist.total),
    }
    header = ["n", "from", "to", "percent", "scientific"]
    return Output(result, [r.percent], header, [[n, a, b, r.percent, r.scientific]], p, "recurrence")


def cmd_family_mode(ctx: Context) -> Output:
    n = ctx.args.n
    dist = ctx.family_distribution(n)
    mode, tie = dist.mode()
    p = dist.mass(mode)
    r = render_probability(p, ctx.args.digits)
    result = {"n": n, "mode": mode, "tie": tie, "count": int_to_decimal(dist.counts[mode])}
    line = f"{mode} (tie)" if tie else str(mode)
    header = ["n", "mode", "tie", "percent"]
    return Output(result, [line], header, [[n, mode, str(tie).lower(), r.percent]], p, "recurrence")


def cmd_no_isolates(ctx: Context) -> Output:
    args = ctx.args
    n = args.n
    method = _method(ctx, COUNT_METHODS, "table")
    count = no_isolate_count(n, method)
    s = int_to_decimal(count)
    if not args.probability:
        return Output({"n": n, "count": s}, [s], ["n", "count"], [[n, s]], method=method)
    if n < 1:
        raise ValueError("need at least one language to classify")
    total = sum(ctx.stirling_row(n))
    p = Fraction(count, total)
    r = render_probability(p, args.digits)
    t = int_to_decimal(total)
    result = {"n": n, "count": s, "total": t}
    header = ["n", "count", "total", "percent", "scientific"]
    return Output(
        result, [f"{r.percent}\t{s}/{t}"], header, [[n, s, t, r.percent, r.scientific]], p, method
    )


def cmd_isolate_dist(ctx: Context) -> Output:
    args = ctx.args
    n, f = args.n, args.families
    if f is None:
        raise UsageError("isolate-dist needs --families")
    method = _method(ctx, COUNT_METHODS, "table")
    if method == "table":
        dist = isolate_distribution(n, f)
    else:
        if not 1 <= f <= n:
            raise ValueError(f"need 1 <= f <= n, got n={n}, f={f}")
        counts = tuple(family_isolate_count(n, f, i, "egf") for i in range(f + 1))
        dist = IsolateDistribution(n, f, counts, sum(counts))
    mean = dist.mean()
    rows = []
    entries = []
    for i, c in enumerate(dist.counts):
        r = render_probability(dist.prob(i), args.digits)
        rows.append([i, int_to_decimal(c), r.percent])
        entries.append({"i": i, "count": int_to_decimal(c), "percent": r.percent})
    header = ["i", "count", "probability"]
    mean_text = format_significant(mean, args.digits)
    result: dict[str, Any] = {
        "n": n,
        "families": f,
        "total": int_to_decimal(dist.total),
        "mean": {**_fraction_dict(mean), "decimal": mean_text},
        "distribution": entries,
    }
    plain = _table(header, rows) + [f"mean\t{mean_text}"]
    p = None
    if args.tail is not None:
        p = dist.tail(args.tail)
        r = render_probability(p, args.digits)
        result["tail"] = {"threshold": args.tail, "percent": r.percent}
        plain.append(f"P(isolates > {args.tail})\t{r.percent}")
    return Output(result, plain, header, rows, p, method)


def cmd_sample(ctx: Context) -> Output:
    args = ctx.args
    summary = summarize(args.n, args.count, args.seed, workers=args.workers)
    mean, lo, hi = summary.family_mean_interval()
    p0, p0lo, p0hi = summary.isolate_fraction(lambda i: i == 0)

    def g(x: float) -> str:
        return f"{x:.6g}"

    result: dict[str, Any] = {
        "n": args.n,
        "samples": summary.samples,
        "family_histogram": {str(k): v for k, v in summary.family_histogram.items()},
        "isolate_histogram": {str(k): v for k, v in summary.isolate_histogram.items()},
        "mean_families": {"estimate": mean, "low": lo, "high": hi},
        "no_isolates": {"estimate": p0, "low": p0lo, "high": p0hi},
    }
    plain = [
        f"samples\t{summary.samples}",
        f"mean families\t{g(mean)}\t[{g(lo)}, {g(hi)}]",
        f"P(no isolates)\t{g(p0)}\t[{g(p0lo)}, {g(p0hi)}]",
    ]
    if args.range_from is not None or args.range_to is not None:
        a = 1 if args.range_from is None else args.range_from
        b = args.n if args.range_to is None else args.range_to
        pr, prlo, prhi = summary.family_fraction(lambda k: a <= k <= b)
        result["family_range"] = {"from": a, "to": b, "estimate": pr, "low": prlo, "high": prhi}
        plain.append(f"P({a} <= families <= {b})\t{g(pr)}\t[{g(prlo)}, {g(prhi)}]")
    header = ["statistic", "value", "frequency"]
    rows = [["families", k, c] for k, c in summary.family_histogram.items()]
    rows += [["isolates", i, c] for i, c in summary.isolate_histogram.items()]
    plain += _table(header, rows)
    meta = {"seed": args.seed, "prng": summary.prng}
    return Output(result, plain, header, rows, method="exact-uniform", extra_meta=meta)


def _parse_override(text: str) -> tuple[int, int]:
    n, sep, value = text.partition("=")
    if not sep or not n.strip().isdigit() or not value.strip().isdigit():
        raise argparse.ArgumentTypeError(f"expected N=VALUE, got {text!r}")
    return int(n), int(value)


COMMANDS: dict[str, Callable[[Context], Output]] = {
    "bell": cmd_bell,
    "stirling": cmd_stirling,
    "partitions": cmd_partitions,
    "family-dist": cmd_family_dist,
    "family-mode": cmd_family_mode,
    "no-isolates": cmd_no_isolates,
    "isolate-dist": cmd_isolate_dist,
    "sample": cmd_sample,
}


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--digits", type=_positive, default=3, help="significant digits (default 3)")
    common.add_argument("--method", help="computation route; choices depend on the subcommand")
    common.add_argument("--cache-dir", help="table cache directory (default $BELLSTAT_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--allow-large", action="store_true", help=f"permit n > {SOFT_CAP}")
    common.add_argument("--timing", action="store_true", help="add elapsed time to json metadata")

    parser = argparse.ArgumentParser(
        prog="bellstat",
        description="Exact counts and probabilities for classifying n items into families.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("bell", "Bell number B(n)")
    p.add_argument("--n", type=_nonneg, required=True)
    p = add("stirling", "Stirling numbers S(n, k), or the whole row")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--k", type=_nonneg)
    p = add("partitions", "integer partitions of n with their classification counts")
    p.add_argument("--n", type=_nonneg, required=True)
    p = add("family-dist", "distribution of the number of families")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--from", dest="range_from", type=_nonneg)
    p.add_argument("--to", dest="range_to", type=_nonneg)
    p = add("family-mode", "most likely number of families")
    p.add_argument("--n", type=_positive, required=True)
    p = add("no-isolates", "classifications with no single-member family")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--probability", action="store_true")
    p = add("isolate-dist", "isolate count given the number of families")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--families", type=_positive, required=True)
    p.add_argument("--tail", type=int, help="also report P(isolates > TAIL)")
    p = add("sample", "Monte Carlo summary of uniform random classifications")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--count", type=_positive, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--from", dest="range_from", type=_nonneg)
    p.add_argument("--to", dest="range_to", type=_nonneg)
    p = add("reproduce-paper", "recompute every published figure and report PASS/FAIL")
    p.add_argument("--n-africa", type=_positive, default=1500)
    p.add_argument(
        "--inject-bell",
        type=_parse_override,
        action="append",
        default=[],
        metavar="N=VALUE",
        help="substitute a Bell value (negative control)",
    )
    return parser


def _emit(out: Output, args: argparse.Namespace, meta: dict[str, Any], stream) -> None:
    if args.format == "plain":
        for line in out.plain:
            stream.write(line + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if out.header:
            writer.writerow(out.header)
        writer.writerows(out.rows)
        stream.write(buf.getvalue())
    else:
        params = {
            k: v
            for k, v in vars(args).items()
            if k not in ("command", "format", "cache_dir", "no_cache", "timing", "allow_large")
        }
        record = {
            "query": {"command": args.command, "params": params},
            "result": out.result,
            "exact": None if out.probability is None else _fraction_dict(out.probability),
            "rendered": None
            if out.probability is None
            else render_probability(out.probability, args.digits).rendered_dict(),
            "meta": meta,
        }
        stream.write(json.dumps(record, ensure_ascii=False, indent=2) + "\n")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    for name in ("n", "n_africa"):
        value = getattr(args, name, None)
        if value is not None and value > SOFT_CAP and not args.allow_large:
            stderr.write(f"bellstat: error: n={value} exceeds the soft cap {SOFT_CAP}; pass --allow-large\n")
            return 2

    if args.command == "reproduce-paper":
        return _run_reproduce(args, stdout)

    started = time.perf_counter()
    ctx = Context(args)
    try:
        out = COMMANDS[args.command](ctx)
    except UsageError as exc:
        stderr.write(f"bellstat {args.command}: error: {exc}\n")
        return 2
    except (ValueError, ArithmeticError) as exc:
        stderr.write(f"bellstat {args.command}: error: {exc}\n")
        return 1
    meta: dict[str, Any] = {"version": __version__, "method": out.method, "cache_hit": ctx.cache_hit}
    meta.update(out.extra_meta)
    if args.timing:
        meta["elapsed_seconds"] = round(time.perf_counter() - started, 6)
    _emit(out, args, meta, stdout)
    return 0


def _run_reproduce(args: argparse.Namespace, stdout) -> int:
    overrides = dict(args.inject_bell)
    if args.format == "plain":
        return reproduce_paper(args.n_africa, overrides, emit=lambda line: stdout.write(line + "\n"))
    from .reproduce import run_claims

    claims = run_claims(args.n_africa, overrides)
    status = 1 if any(not c.passed for c in claims) else 0
    header = ["claim", "cited", "computed", "status", "note"]
    rows = [[c.name, c.cited, c.computed, "PASS" if c.passed else "FAIL", c.note] for c in claims]
    result = {
        "passed": status == 0,
        "claims": [dict(zip(header, r)) for r in rows],
    }
    out = Output(result, [], header, rows, method="reproduce")
    _emit(out, args, {"version": __version__, "method": "reproduce", "cache_hit": None}, stdout)
    return status


def main() -> None:
    sys.exit(run())
