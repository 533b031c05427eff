"""Oracle suites behind ``dualheap verify``."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .heapcore import build_heap
from .instrumentation import CountingContext
from .oracle import (
    Distribution,
    InputSpec,
    gen_input,
    partition_oracle,
    reference_order_statistics,
    splitmix64,
    verify_sorted_permutation,
)
from .sorters import SORTERS, PartitionRegion, dualheap_partition, exchange_phase, partition_step


@dataclass
class CheckResult:
    name: str
    cases: int
    failures: int
    example: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f"  first failure: {self.example}" if self.example else ""
        return f"{status} {self.name} ({self.cases} cases, {self.failures} failures){tail}"


def depth_bound(n: int) -> int:
    return 2 * int(math.log2(n)) + 4 if n >= 1 else 4


def exhaustive_sort_check(name: str, sort: Callable, max_n: int) -> CheckResult:
    res = CheckResult(f"exhaustive {name} n<={max_n}", 0, 0)
    for n in range(max_n + 1):
        for perm in itertools.permutations(range(n)):
            arr = np.array(perm, dtype=np.uint64)
            sort(arr, CountingContext())
            res.cases += 1
            v = verify_sorted_permutation(perm, arr)
            if not v:
                res.failures += 1
                res.example = res.example or f"{list(perm)} -> {arr.tolist()} ({v.reason})"
    return res


_DISTS = [(Distribution.UNIFORM, 1), (Distribution.SORTED, 1), (Distribution.REVERSED, 1),
          (Distribution.CONSTANT, 1), (Distribution.FEW_DISTINCT, 2),
          (Distribution.FEW_DISTINCT, 16)]


def random_specs(count: int, max_n: int = 512, seed: int = 12345,
                 min_n: int = 0) -> list[InputSpec]:
    """``count`` input specs cycling through every distribution, sizes
    min_n..max_n drawn from splitmix64."""
    draws = splitmix64(seed, count)
    specs = []
    for i in range(count):
        dist, k = _DISTS[i % len(_DISTS)]
        n = min_n + int(draws[i] % np.uint64(max_n - min_n + 1))
        specs.append(InputSpec(dist, n, seed + i + 1, k))
    return specs


def random_sort_check(name: str, sort: Callable, specs: list[InputSpec],
                      check_depth: bool = False) -> CheckResult:
    res = CheckResult(f"random {name}", 0, 0)
    for spec in specs:
        data = gen_input(spec)
        arr = data.copy()
        ctx = CountingContext()
        sort(arr, ctx)
        res.cases += 1
        v = verify_sorted_permutation(data, arr)
        if v and check_depth and ctx.counters.max_depth > depth_bound(spec.n):
            v = type(v)(False, f"depth {ctx.counters.max_depth} > {depth_bound(spec.n)}")
        if not v:
            res.failures += 1
            res.example = res.example or f"{spec} ({v.reason})"
    return res


def partition_checks(arr: np.ndarray) -> str:
    """Run the partition and set-aside invariants on one region; returns
    an empty string on success or a description of the first violation."""
    n = len(arr)
    region = PartitionRegion(1, n)
    n_small = region.n_small

    a = arr.copy()
    ctx = CountingContext()
    dualheap_partition(a, region, ctx)
    v = partition_oracle(arr, a, n_small)
    if not v:
        return f"partition: {v.reason}"

    b = arr.copy()
    build_heap(b, region.small_view())
    build_heap(b, region.large_view())
    swaps = exchange_phase(b, region.small_view(), region.large_view())
    if swaps > n_small:
        return f"exchange made {swaps} top-level swaps > nS={n_small}"

    if n >= 4:
        c = arr.copy()
        partition_step(c, region)
        pos = [n_small - 1, n_small, n_small + 1, n_small + 2]
        want = reference_order_statistics(arr, pos)
        got = [int(c[p - 1]) for p in pos]
        if got != want:
            return f"set-aside positions {pos} hold {got}, expected {want}"
    return ""


def exhaustive_partition_check(max_n: int) -> CheckResult:
    res = CheckResult(f"exhaustive partition/set-aside 4<=n<={max_n}", 0, 0)
    for n in range(4, max_n + 1):
        for perm in itertools.permutations(range(n)):
            res.cases += 1
            err = partition_checks(np.array(perm, dtype=np.uint64))
            if err:
                res.failures += 1
                res.example = res.example or f"{list(perm)}: {err}"
    return res


def random_partition_check(specs: list[InputSpec]) -> CheckResult:
    res = CheckResult("random partition/set-aside", 0, 0)
    for spec in specs:
        if spec.n < 2:
            continue
        res.cases += 1
        err = partition_checks(gen_input(spec))
        if err:
            res.failures += 1
            res.example = res.example or f"{spec}: {err}"
    return res


def run_verification(exhaustive_max: int, random_cases: int,
                     sorters: Mapping[str, Callable] | None = None) -> list[CheckResult]:
    sorters = SORTERS if sorters is None else sorters
    results = []
    if exhaustive_max > 0:
        for name, sort in sorters.items():
            results.append(exhaustive_sort_check(name, sort, exhaustive_max))
        if exhaustive_max >= 4:
            results.append(exhaustive_partition_check(exhaustive_max))
    if random_cases > 0:
        specs = random_specs(random_cases)
        for name, sort in sorters.items():
            results.append(random_sort_check(name, sort, specs, check_depth=(name == "dualheap")))
        results.append(random_partition_check(specs))
    return results
