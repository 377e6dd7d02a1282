"""Benchmark command line: build or load a graph, run an algorithm, emit CSV.

Examples::

    lexgreedy-bench --algo mis-rootset --graph gnm:16384,81920 --seed 7 --workers 4 --verify
    lexgreedy-bench --algo mm-prefix --graph rmat:14,81920 --sweep 1/n,1e-3,1e-2,0.1,1 --reps 3

Priority seed ``seed + r`` is used for repetition ``r``; the graph is built
from ``--graph-seed`` (default: ``--seed``).  Exit status is 0 on success,
1 on unreadable input, 2 on bad flags and 3 when ``--verify`` finds a bad
result.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import matching, mis, verify
from ._parallel import DEFAULT_GRAIN
from .graph import Graph, GraphInputError, GraphSpec
from .priority import PrefixSchedule, random_priority
from .stats import CSV_COLUMNS, RunStats

ALGOS = ("mis-seq", "mis-rootset", "mis-prefix", "mis-luby", "mm-seq", "mm-rootset", "mm-prefix")
PREFIX_ALGOS = ("mis-prefix", "mm-prefix")

EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3


class VerificationError(RuntimeError):
    def __init__(self, stats: RunStats, report: str):
        self.stats = stats
        self.report = report
        super().__init__(report)


@dataclass
class SweepSpec:
    points: list[PrefixSchedule]
    workers: list[int] = field(default_factory=lambda: [1])
    reps: int = 1
    base_seed: int = 0

    def __post_init__(self):
        if not self.points or not self.workers:
            raise ValueError("sweep needs at least one prefix point and one worker count")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")


def _execute(graph: Graph, algo: str, seed: int, schedule: PrefixSchedule | None, workers: int, grain: int):
    is_mm = algo.startswith("mm-")
    prio = None if algo == "mis-luby" else random_priority(graph.m if is_mm else graph.n, seed)
    if algo == "mis-seq":
        res = mis.sequential_greedy(graph, prio)
    elif algo == "mis-rootset":
        res = mis.parallel_rootset(graph, prio, workers, grain=grain)
    elif algo == "mis-prefix":
        res = mis.prefix_greedy(graph, prio, schedule, workers, grain=grain)
    elif algo == "mis-luby":
        res = mis.luby(graph, seed, workers, grain=grain)
    elif algo == "mm-seq":
        res = matching.sequential_greedy_mm(graph, prio)
    elif algo == "mm-rootset":
        res = matching.parallel_rootset_mm(graph, prio, workers, grain=grain)
    elif algo == "mm-prefix":
        res = matching.prefix_greedy_mm(graph, prio, schedule, workers, grain=grain)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    return res, prio


def _verify(graph: Graph, algo: str, res, prio) -> str:
    if algo.startswith("mm-"):
        verdict = verify.check_mm(graph, res.matched)
        report = verdict.report()
        if not np.array_equal(res.matched, verify.lex_first_mm_oracle(graph, prio)):
            report += "\nlex-first: matching differs from the greedy oracle"
    else:
        verdict = verify.check_mis(graph, res.in_mis)
        report = verdict.report()
        if algo != "mis-luby" and not np.array_equal(res.in_mis, verify.lex_first_oracle(graph, prio)):
            report += "\nlex-first: set differs from the greedy oracle"
    return report.strip()


def run(graph: Graph | GraphSpec, algo: str, seed: int = 0, schedule: PrefixSchedule | None = None,
        workers: int = 1, check: bool = False, grain: int = DEFAULT_GRAIN) -> RunStats:
    """One algorithm run as a CSV-ready :class:`RunStats`.

    Raises :class:`VerificationError` when ``check`` is set and the result is
    invalid or (for the greedy algorithms) differs from the oracle.
    """
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if algo in PREFIX_ALGOS and schedule is None:
        raise ValueError(f"{algo} needs a prefix schedule")
    if isinstance(graph, GraphSpec):
        graph = graph.make()
    start = time.perf_counter_ns()
    res, prio = _execute(graph, algo, seed, schedule, workers, grain)
    wall = time.perf_counter_ns() - start
    stats = res.stats
    stats.algo, stats.seed, stats.workers = algo, seed, workers
    stats.schedule = stats.schedule if algo in PREFIX_ALGOS else ""
    stats.wall_time_ns = wall
    if check:
        report = _verify(graph, algo, res, prio)
        if report:
            raise VerificationError(stats, report)
        stats.verified = True
    return stats


def sweep(graph: Graph | GraphSpec, algo: str, spec: SweepSpec, check: bool = False,
          grain: int = DEFAULT_GRAIN) -> list[RunStats]:
    """One row per (prefix point, worker count, repetition)."""
    if algo not in PREFIX_ALGOS:
        raise ValueError(f"sweeps need a prefix algorithm, got {algo!r}")
    if isinstance(graph, GraphSpec):
        graph = graph.make()
    rows = []
    for point in spec.points:
        for workers in spec.workers:
            for rep in range(spec.reps):
                rows.append(run(graph, algo, spec.base_seed + rep, point, workers, check, grain))
    return rows


def write_csv(rows, fh, header: bool = True) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_row())


def read_csv(fh) -> list[RunStats]:
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected header {header}")
    return [RunStats.from_csv_row(row) for row in reader]


def parse_sweep_point(text: str, items: int) -> PrefixSchedule:
    """``F`` (fraction), ``1/n`` (one item), or any ``--schedule`` form."""
    text = text.strip()
    if text == "1/n":
        return PrefixSchedule.fixed_fraction(1.0 / max(items, 1))
    if ":" in text:
        return PrefixSchedule.parse(text)
    return PrefixSchedule.fixed_fraction(float(text))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lexgreedy-bench", description=__doc__.split("\n\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--algo", required=True, choices=ALGOS)
    p.add_argument("--graph", required=True, help="file:PATH | gnm:N,M | rmat:SCALE,M[,A,B,C]")
    p.add_argument("--seed", type=int, default=0, help="priority seed (unsigned 64-bit)")
    p.add_argument("--graph-seed", type=int, default=None, help="generator seed (default: --seed)")
    p.add_argument("--schedule", default="frac:1.0", help="frac:F | count:S | degree:C (prefix algorithms)")
    p.add_argument("--workers", default="1", help="thread count, or a comma list for sweeps")
    p.add_argument("--sweep", default=None, help="comma list of prefix points, e.g. 1/n,1e-3,0.1,1")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--grain", type=int, default=DEFAULT_GRAIN, help="loops shorter than this run serially")
    p.add_argument("--verify", action="store_true", help="check every result against the oracles")
    p.add_argument("--csv", default=None, help="output path (default: standard output)")
    return p


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    seed_max = (1 << 64) - 1
    if not 0 <= args.seed <= seed_max:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        workers = [int(w) for w in args.workers.split(",")]
        if any(w < 1 for w in workers):
            raise ValueError
    except ValueError:
        parser.error(f"--workers needs positive integers, got {args.workers!r}")
    if args.reps < 1:
        parser.error("--reps must be >= 1")
    if args.grain < 1:
        parser.error("--grain must be >= 1")
    graph_seed = args.seed if args.graph_seed is None else args.graph_seed
    try:
        spec = GraphSpec.parse(args.graph, seed=graph_seed)
    except GraphInputError as err:
        parser.error(str(err))
    if args.sweep is not None and args.algo not in PREFIX_ALGOS:
        parser.error("--sweep needs --algo mis-prefix or mm-prefix")
    try:
        schedule = PrefixSchedule.parse(args.schedule)
    except ValueError as err:
        parser.error(str(err))

    try:
        graph = spec.make()
    except (GraphInputError, OSError) as err:
        print(f"lexgreedy-bench: {err}", file=sys.stderr)
        return EXIT_INPUT

    items = graph.m if args.algo.startswith("mm-") else graph.n
    if args.sweep is not None:
        try:
            points = [parse_sweep_point(t, items) for t in args.sweep.split(",")]
            plan = SweepSpec(points, workers, args.reps, args.seed)
        except ValueError as err:
            parser.error(str(err))
    else:
        plan = SweepSpec([schedule], workers, args.reps, args.seed)

    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    status = 0
    try:
        write_csv([], out)
        for point in plan.points:
            for w in plan.workers:
                for rep in range(plan.reps):
                    try:
                        row = run(graph, args.algo, plan.base_seed + rep, point, w, args.verify, args.grain)
                    except VerificationError as err:
                        print(f"verification failed ({args.algo}, seed {plan.base_seed + rep}):\n{err.report}",
                              file=sys.stderr)
                        row = err.stats
                        status = EXIT_VERIFY
                    write_csv([row], out, header=False)
                    out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
