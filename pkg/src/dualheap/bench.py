"""Experiment grid runner and the CSV record format."""

from __future__ import annotations

import csv
import time
from dataclasses import astuple, dataclass, fields
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .instrumentation import CountingContext
from .oracle import Distribution, InputSpec, gen_input
from .parallel import ParallelPolicy, dualheap_sort_parallel
from .sorters import dualheap_sort, heapsort, heapsort_modified

ALGORITHMS = ("heapsort", "heapsort_modified", "dualheap", "dualheap_parallel")


@dataclass(frozen=True)
class BenchmarkRecord:
    algorithm: str
    n: int
    seed: int
    distribution: str
    comparisons: int
    moves: int
    tree_swaps: int
    max_depth: int
    wall_ns: int

    @property
    def operations(self) -> int:
        return self.comparisons + self.moves


CSV_HEADER = [f.name for f in fields(BenchmarkRecord)]


def get_sorter(name: str, policy: ParallelPolicy | None = None) -> Callable:
    if name == "heapsort":
        return heapsort
    if name == "heapsort_modified":
        return heapsort_modified
    if name == "dualheap":
        return dualheap_sort
    if name == "dualheap_parallel":
        policy = policy or ParallelPolicy()
        return lambda arr, ctx=None: dualheap_sort_parallel(arr, ctx, policy)
    raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")


def measure(algorithm: str, spec: InputSpec, policy: ParallelPolicy | None = None,
            timing: bool = True) -> BenchmarkRecord:
    """Counted run plus a separate uncounted run for wall time."""
    sort = get_sorter(algorithm, policy)
    data = gen_input(spec)
    ctx = CountingContext()
    sort(data.copy(), ctx)
    c = ctx.counters
    wall = 0
    if timing:
        scratch = data.copy()
        t0 = time.perf_counter_ns()
        sort(scratch, CountingContext.null())
        wall = time.perf_counter_ns() - t0
    return BenchmarkRecord(algorithm, spec.n, spec.seed, spec.label,
                           c.comparisons, c.moves, c.tree_swaps, c.max_depth, wall)


def run_grid(algorithms: Sequence[str], sizes: Sequence[int],
             distributions: Sequence[tuple[Distribution, int]], reps: int, seed0: int = 1,
             policy: ParallelPolicy | None = None, timing: bool = True) -> list[BenchmarkRecord]:
    """One record per (algorithm, size, distribution, repetition); the
    repetition ``r`` uses seed ``seed0 + r``."""
    out = []
    for algo in algorithms:
        get_sorter(algo, policy)  # fail before doing any work
        for n in sizes:
            for dist, k in distributions:
                for r in range(reps):
                    spec = InputSpec(dist, n, seed0 + r, k)
                    out.append(measure(algo, spec, policy, timing))
    return out


def write_csv(records: Iterable[BenchmarkRecord], fp: TextIO) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(astuple(rec))


def read_csv(fp: TextIO) -> list[BenchmarkRecord]:
    """Parse a CSV written by :func:`write_csv`; raises ValueError on any
    schema mismatch."""
    rows = list(csv.reader(fp))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    out = []
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ValueError(f"line {lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        try:
            ints = [int(x) for x in row[4:]]
            out.append(BenchmarkRecord(row[0], int(row[1]), int(row[2]), row[3], *ints))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer counter field") from None
    return out


def mean_operations(records: Iterable[BenchmarkRecord], algorithm: str) -> float:
    vals = [r.operations for r in records if r.algorithm == algorithm]
    return float(np.mean(vals)) if vals else float("nan")
