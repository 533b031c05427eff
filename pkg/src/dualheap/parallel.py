"""Fork-join dualheap sort.

The two sub-regions left after a partition step occupy disjoint position
ranges, as do the two subheaps built at the start of a step, so both pairs
may run on separate threads.  The exchange phase stays on the task that
owns the region.  Kernels release the GIL, so threads do run concurrently.

Each task counts into a private :class:`CountingContext`; children are
merged into their parent at the join, which keeps the totals independent
of scheduling.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .heapcore import _ctx, check_array
from .instrumentation import CountingContext, OpCounters
from .sorters import (
    PartitionRegion,
    SortOutcome,
    build_halves_kernel,
    dualheap_prelude_kernel,
    dualheap_sort_kernel,
    exchange_kernel,
    partition_heap_kernel,
    set_aside_kernel,
)

# observer(kind, first, last, ctx) is told about every finished task;
# first..last is the 1-based position range the task was allowed to touch.
Observer = Callable[[str, int, int, CountingContext], None]


@dataclass(frozen=True)
class ParallelPolicy:
    max_concurrency: int = 4
    sequential_cutoff: int = 4096

    def __post_init__(self):
        if self.max_concurrency < 1:
            raise ValueError(f"max_concurrency must be >= 1, got {self.max_concurrency}")
        if self.sequential_cutoff < 4:
            raise ValueError(f"sequential_cutoff must be >= 4, got {self.sequential_cutoff}")


class _ForkJoin:
    def __init__(self, arr: np.ndarray, policy: ParallelPolicy, observer: Observer | None):
        self.arr = arr
        self.policy = policy
        self.observer = observer
        # the calling thread is one of the max_concurrency running tasks
        self.slots = threading.BoundedSemaphore(policy.max_concurrency - 1) \
            if policy.max_concurrency > 1 else None

    def _report(self, kind, first, last, ctx):
        if self.observer is not None:
            self.observer(kind, first, last, ctx)

    def fork(self, parent: CountingContext, jobs) -> None:
        """Run ``jobs`` (callables taking a context) and join them all."""
        children = [parent.spawn() for _ in jobs]
        threads, inline, errors = [], [0], []

        def run(i):
            try:
                jobs[i](children[i])
            except BaseException as exc:  # re-raised on the joining thread
                errors.append(exc)
            finally:
                if threading.current_thread() is not main:
                    self.slots.release()

        main = threading.current_thread()
        for i in range(1, len(jobs)):
            if self.slots is not None and self.slots.acquire(blocking=False):
                t = threading.Thread(target=run, args=(i,))
                t.start()
                threads.append(t)
            else:
                inline.append(i)
        for i in inline:
            run(i)
        for t in threads:
            t.join()
        if errors:
            raise errors[0]
        for child in children:
            parent.absorb(child)

    def prelude(self, ctx: CountingContext) -> None:
        dualheap_prelude_kernel(self.arr, len(self.arr), ctx.state)
        self._report("prelude", 1, len(self.arr), ctx)

    def build_half(self, region: PartitionRegion, which: int, ctx: CountingContext) -> None:
        build_halves_kernel(self.arr, region.offset - 1, region.n, which, ctx.state)
        if which == 0:
            self._report("build_small", region.offset, region.offset + region.n_small - 1, ctx)
        else:
            self._report("build_large", region.offset + region.n_small, region.last, ctx)

    def region(self, region: PartitionRegion, depth: int, ctx: CountingContext) -> None:
        arr, off, n = self.arr, region.offset - 1, region.n
        if n < self.policy.sequential_cutoff:
            partition_heap_kernel(arr, off, n, depth, ctx.state)
            self._report("region", region.offset, region.last, ctx)
            return
        ctx.add(OpCounters(max_depth=depth))
        self.fork(ctx, [lambda c: self.build_half(region, 0, c),
                        lambda c: self.build_half(region, 1, c)])
        n_small, n_large = region.n_small, region.n_large
        exchange_kernel(arr, off + n_small - 1, n_small, off + n_small, n_large, depth, ctx.state)
        set_aside_kernel(arr, off, n, ctx.state)
        jobs = [lambda c, r=r: self.region(r, depth + 1, c) for r in region.children()]
        if jobs:
            self.fork(ctx, jobs)
        self._report("region", region.offset, region.last, ctx)


def dualheap_sort_parallel(arr: np.ndarray, ctx: CountingContext | None = None,
                           policy: ParallelPolicy | None = None,
                           observer: Observer | None = None) -> SortOutcome:
    """Dualheap sort with fork-join over disjoint partition regions.

    Produces the same array and the same merged counters as
    :func:`dualheap_sort` for every policy.
    """
    check_array(arr)
    ctx = _ctx(ctx)
    policy = policy or ParallelPolicy()
    if ctx.cache_stats is not None:
        raise ValueError("cache-model contexts need the sequential sort")
    if ctx.tracing and policy.max_concurrency > 1:
        raise ValueError("traces are recorded only with max_concurrency=1")
    n = len(arr)
    if n <= 3 or n - 2 < policy.sequential_cutoff:
        dualheap_sort_kernel(arr, n, ctx.state)
        if observer is not None:
            observer("region", 1, n, ctx)
        return SortOutcome(ctx.counters, n)
    driver = _ForkJoin(arr, policy, observer)
    driver.fork(ctx, [driver.prelude])
    driver.fork(ctx, [lambda c: driver.region(PartitionRegion(3, n - 2), 1, c)])
    return SortOutcome(ctx.counters, n)
