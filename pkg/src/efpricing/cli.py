"""Command-line frontend: generate, solve, verify and benchmark.

Benchmarking pairs the two pricing methods on identical inputs: each
trial generates one instance, computes the optimal matching once, and
then times each method on the same reordered matrix and gap matrix.
Matching time is reported separately and never mixed into pricing time.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import t as student_t

from .core import Allocation, ValuationMatrix, build_gap_matrix, reorder
from .instance import (
    ParseError,
    SolutionRecord,
    generate,
    read_instance,
    read_solution,
    write_instance,
    write_solution,
)
from .matching import solve_assignment
from .pricing import (
    NonOptimalAllocation,
    PriceVector,
    prices_bellman_ford,
    prices_efpm,
)
from .verify import check_envy_free

PRICING_METHODS = {
    "efpm": prices_efpm,
    "bellman-ford": prices_bellman_ford,
}

CSV_HEADER = ["n", "method", "trial", "pricing_seconds", "matching_seconds", "iterations"]


def solve_instance(v: ValuationMatrix, method: str):
    """Full pipeline on one instance.

    Returns (record, timings) where timings holds matching_seconds
    (matching plus reorder/gap preprocessing) and pricing_seconds (the
    pricing method alone, measured the same way the benchmark does).
    """
    fn = PRICING_METHODS[method]
    t0 = time.perf_counter()
    result = solve_assignment(v)
    vp = reorder(v, result.allocation)
    gaps = build_gap_matrix(vp)
    t1 = time.perf_counter()
    utilities, prices = fn(gaps, vp)
    t2 = time.perf_counter()
    record = SolutionRecord(
        n=v.n,
        assignment=[int(x) for x in result.allocation.assignment],
        prices=[int(x) for x in prices.p],
        revenue=prices.revenue,
        iterations_used=utilities.iterations_used,
    )
    return record, {"matching_seconds": t1 - t0, "pricing_seconds": t2 - t1}


@dataclass(frozen=True)
class BenchTrial:
    n: int
    method: str
    trial: int
    pricing_seconds: float
    matching_seconds: float
    iterations: int


@dataclass(frozen=True)
class MethodSummary:
    n: int
    method: str
    trials: int
    mean_seconds: float
    std_seconds: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class BenchReport:
    trials: list[BenchTrial]
    summaries: list[MethodSummary]
    #: (n -> percent) mean pricing-time reduction of efpm vs bellman-ford,
    #: present only when both methods were benchmarked.
    reductions: dict[int, float]


def run_bench(
    sizes: list[int],
    trials: int,
    seed: int,
    methods: list[str],
    max_value: int = 1_000_000,
    warmup: int = 0,
    progress=None,
) -> BenchReport:
    """Paired benchmark over freshly generated instances.

    Trial t of every size uses seed + t, so both methods always see the
    same inputs.  With warmup > 0, the first instance of each size is
    priced that many extra times per method before any timing starts.
    """
    if trials < 2:
        raise ValueError(f"need at least 2 trials for a confidence interval, got {trials}")
    if any(n < 1 for n in sizes):
        raise ValueError(f"sizes must be positive, got {sizes}")
    rows: list[BenchTrial] = []
    for n in sizes:
        for trial in range(trials):
            v = generate(n, seed + trial, max_value)
            t0 = time.perf_counter()
            matched = solve_assignment(v)
            matching_seconds = time.perf_counter() - t0
            vp = reorder(v, matched.allocation)
            gaps = build_gap_matrix(vp)
            if trial == 0:
                for method in methods:
                    for _ in range(warmup):
                        PRICING_METHODS[method](gaps, vp)
            outcomes = {}
            for method in methods:
                t0 = time.perf_counter()
                utilities, prices = PRICING_METHODS[method](gaps, vp)
                elapsed = time.perf_counter() - t0
                rows.append(
                    BenchTrial(
                        n=n,
                        method=method,
                        trial=trial,
                        pricing_seconds=elapsed,
                        matching_seconds=matching_seconds,
                        iterations=utilities.iterations_used,
                    )
                )
                outcomes[method] = (utilities, prices)
            _check_agreement(outcomes, n, trial)
        if progress is not None:
            progress(f"benchmarked n={n} ({trials} trials)")
    return _summarize(rows, methods)


def _check_agreement(outcomes, n, trial):
    if len(outcomes) < 2:
        return
    (m0, (u0, p0)), (m1, (u1, p1)) = list(outcomes.items())[:2]
    if not (np.array_equal(u0.y, u1.y) and np.array_equal(p0.p, p1.p)):
        raise RuntimeError(
            f"methods {m0} and {m1} disagree on n={n} trial={trial}; "
            "this is a solver bug"
        )


def _summarize(rows: list[BenchTrial], methods: list[str]) -> BenchReport:
    summaries = []
    means: dict[tuple[int, str], float] = {}
    sizes = sorted({r.n for r in rows})
    for n in sizes:
        for method in methods:
            xs = [r.pricing_seconds for r in rows if r.n == n and r.method == method]
            k = len(xs)
            mean = sum(xs) / k
            var = sum((x - mean) ** 2 for x in xs) / (k - 1)
            std = math.sqrt(var)
            half = float(student_t.ppf(0.975, k - 1)) * std / math.sqrt(k)
            summaries.append(
                MethodSummary(
                    n=n,
                    method=method,
                    trials=k,
                    mean_seconds=mean,
                    std_seconds=std,
                    ci_low=mean - half,
                    ci_high=mean + half,
                )
            )
            means[(n, method)] = mean
    reductions = {}
    if "efpm" in methods and "bellman-ford" in methods:
        for n in sizes:
            bf = means[(n, "bellman-ford")]
            if bf > 0:
                reductions[n] = (1.0 - means[(n, "efpm")] / bf) * 100.0
    return BenchReport(trials=rows, summaries=summaries, reductions=reductions)


def render_table(report: BenchReport) -> str:
    out = io.StringIO()
    header = f"{'n':>8}  {'method':<14}{'trials':>7}  {'mean (s)':>12}  {'std (s)':>12}  95% CI"
    print(header, file=out)
    print("-" * len(header), file=out)
    for s in report.summaries:
        print(
            f"{s.n:>8}  {s.method:<14}{s.trials:>7}  {s.mean_seconds:>12.6f}  "
            f"{s.std_seconds:>12.6f}  ({s.ci_low:.6f}, {s.ci_high:.6f})",
            file=out,
        )
    for n, pct in report.reductions.items():
        print(f"pricing-time reduction of efpm vs bellman-ford at n={n}: {pct:.1f}%", file=out)
    return out.getvalue()


def render_csv(report: BenchReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.trials:
        writer.writerow(
            [r.n, r.method, r.trial, f"{r.pricing_seconds:.9f}", f"{r.matching_seconds:.9f}", r.iterations]
        )
    return out.getvalue()


def render_json(report: BenchReport) -> str:
    doc = {
        "summaries": [asdict(s) for s in report.summaries],
        "reductions": {str(n): pct for n, pct in report.reductions.items()},
        "trials": [asdict(r) for r in report.trials],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efpricing",
        description="Optimal allocations and revenue-maximizing envy-free prices "
        "for unit-demand markets with as many items as consumers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--n", type=int, required=True, help="number of consumers/items")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--max-value", type=int, default=1_000_000)
    gen.add_argument("--out", required=True, help="instance file to write")
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("instance", help="instance file to read")
    solve.add_argument("--method", choices=sorted(PRICING_METHODS), default="efpm")
    solve.add_argument("--out", help="solution file to write (default: stdout)")
    solve.set_defaults(func=_cmd_solve)

    verify = sub.add_parser("verify", help="check a solution against its instance")
    verify.add_argument("instance")
    verify.add_argument("solution")
    verify.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench", help="benchmark the pricing methods")
    bench.add_argument("--sizes", required=True, help="comma-separated instance sizes")
    bench.add_argument("--trials", type=int, required=True)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument(
        "--method",
        action="append",
        choices=sorted(PRICING_METHODS),
        help="restrict to one method (repeatable; default: both)",
    )
    bench.add_argument("--warmup", type=int, default=0, help="untimed solves per size before timing")
    bench.add_argument("--out", help="write the machine-readable report here")
    bench.add_argument("--format", choices=["text", "csv", "json"], default="csv",
                       help="format of the --out report (table always goes to stdout)")
    bench.set_defaults(func=_cmd_bench)
    return parser


def _cmd_gen(args) -> int:
    v = generate(args.n, args.seed, args.max_value)
    write_instance(v, args.out)
    print(f"wrote {args.out}: n={v.n} seed={args.seed} max_value={args.max_value}")
    return 0


def _cmd_solve(args) -> int:
    v = read_instance(args.instance)
    record, timings = solve_instance(v, args.method)
    if args.out:
        write_solution(record, args.out)
    else:
        sys.stdout.write(record.to_json())
    print(
        f"n={record.n} method={args.method} revenue={record.revenue} "
        f"iterations={record.iterations_used} "
        f"matching_seconds={timings['matching_seconds']:.6f} "
        f"pricing_seconds={timings['pricing_seconds']:.6f}",
        file=sys.stderr,
    )
    return 0


def _cmd_verify(args) -> int:
    v = read_instance(args.instance)
    record = read_solution(args.solution)
    if record.n != v.n:
        print(f"size mismatch: instance n={v.n}, solution n={record.n}", file=sys.stderr)
        return 2
    try:
        allocation = Allocation.from_assignment(v, record.assignment)
    except ValueError as exc:
        print(f"invalid assignment: {exc}", file=sys.stderr)
        return 1
    prices = PriceVector(p=np.array(record.prices, dtype=np.int64), revenue=record.revenue)
    failures = 0
    if sum(record.prices) != record.revenue:
        print(
            f"revenue mismatch: record says {record.revenue}, prices sum to {sum(record.prices)}"
        )
        failures += 1
    report = check_envy_free(v, allocation, prices)
    for consumer, item, gain in report.violations:
        print(f"envy: consumer {consumer} gains {gain} by taking item {item}")
    for consumer in report.negative_utility_consumers:
        print(f"negative utility: consumer {consumer} would rather buy nothing")
    if report.envy_free and failures == 0:
        print(f"ok: envy-free, revenue {record.revenue}")
        return 0
    return 1


def _cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    methods = args.method or sorted(PRICING_METHODS)
    report = run_bench(
        sizes,
        args.trials,
        args.seed,
        methods,
        warmup=args.warmup,
        progress=lambda msg: print(msg, file=sys.stderr),
    )
    sys.stdout.write(render_table(report))
    if args.out:
        renderer = {"text": render_table, "csv": render_csv, "json": render_json}[args.format]
        with open(args.out, "w") as fh:
            fh.write(renderer(report))
        print(f"wrote {args.format} report to {args.out}", file=sys.stderr)
    return 0


def _parse_sizes(raw: str) -> list[int]:
    try:
        sizes = [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"bad --sizes value: {raw!r}") from None
    if not sizes:
        raise ValueError("no sizes given")
    return sizes


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonOptimalAllocation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
