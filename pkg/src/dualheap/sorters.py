"""Heapsort, two-exchange heapsort, and dualheap sort/selection.

Region offsets are 1-based positions in the master array.  Inside a
partition region of length ``n`` the small subheap occupies positions
``1..nS`` as a leftward max-heap anchored at ``nS`` and the large subheap
occupies ``nS+1..n`` as a rightward min-heap anchored at ``nS+1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .heapcore import (
    Direction,
    HeapView,
    Kind,
    _check_view,
    _ctx,
    build_kernel,
    check_array,
    max_leftward,
    min_rightward,
    sift_kernel,
)
from .instrumentation import (
    COMPARISONS,
    MOVES,
    TREE_SWAPS,
    CountingContext,
    OpCounters,
    load,
    note_depth,
    store,
    tick,
)

# tree_swap recursion never exceeds the subheap height; 64 covers any int64 size
_FRAMES = 64


def split_sizes(n: int) -> tuple[int, int]:
    """(nS, nL): half of ``n`` rounded down to even, and the remainder."""
    n_small = (n // 2) & ~1
    return n_small, n - n_small


@dataclass(frozen=True)
class PartitionRegion:
    offset: int  # 1-based start position
    n: int

    def __post_init__(self):
        if self.offset < 1 or self.n < 0:
            raise ValueError(f"bad region offset={self.offset} n={self.n}")

    @property
    def n_small(self) -> int:
        return split_sizes(self.n)[0]

    @property
    def n_large(self) -> int:
        return split_sizes(self.n)[1]

    @property
    def last(self) -> int:
        return self.offset + self.n - 1

    def small_view(self) -> HeapView:
        return max_leftward(self.offset + self.n_small - 1 if self.n_small else self.offset,
                            self.n_small)

    def large_view(self) -> HeapView:
        return min_rightward(self.offset + self.n_small, self.n_large)

    def children(self) -> list[PartitionRegion]:
        """Sub-regions left to sort after one partition step (n >= 4)."""
        out = []
        if self.n_small > 3:
            out.append(PartitionRegion(self.offset, self.n_small - 2))
        if self.n_large > 3:
            out.append(PartitionRegion(self.offset + self.n_small + 2, self.n_large - 2))
        return out


@dataclass(frozen=True)
class SortOutcome:
    counters: OpCounters
    n: int


# -- kernels --------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _exchange(a, p, q, st):
    x = load(a, p, st)
    y = load(a, q, st)
    store(a, p, y, st)
    store(a, q, x, st)
    tick(st, MOVES, 2)


@njit(cache=True, nogil=True)
def _order_pair(a, p, q, st):
    """Make a[p] <= a[q]."""
    x = load(a, p, st)
    y = load(a, q, st)
    tick(st, COMPARISONS, 1)
    if x > y:
        store(a, p, y, st)
        store(a, q, x, st)
        tick(st, MOVES, 2)


@njit(cache=True, nogil=True)
def heapsort_kernel(a, n, st):
    build_kernel(a, 0, 1, n, True, st)
    for m in range(n, 1, -1):
        _exchange(a, 0, m - 1, st)
        sift_kernel(a, 0, 1, m - 1, True, 1, st)


@njit(cache=True, nogil=True)
def heapsort_modified_kernel(a, n, st):
    if n < 2:
        return
    build_kernel(a, 0, 1, n, True, st)
    m = n
    while m > 3:
        _exchange(a, 0, m - 1, st)
        b2 = load(a, 1, st)
        b3 = load(a, 2, st)
        tick(st, COMPARISONS, 1)
        i = 2 if b2 > b3 else 3
        if i != m - 1:
            w = load(a, m - 2, st)
            store(a, i - 1, w, st)
            store(a, m - 2, b2 if i == 2 else b3, st)
            tick(st, MOVES, 2)
        m -= 2
        sift_kernel(a, 0, 1, m, True, i, st)
        sift_kernel(a, 0, 1, m, True, 1, st)
    # Both tail placements read every value before overwriting anything.
    if m == 3:
        r = load(a, 0, st)
        b2 = load(a, 1, st)
        b3 = load(a, 2, st)
        tick(st, COMPARISONS, 1)
        store(a, 2, r, st)
        if b2 > b3:
            store(a, 0, b3, st)
            tick(st, MOVES, 2)
        else:
            store(a, 1, b3, st)
            store(a, 0, b2, st)
            tick(st, MOVES, 3)
    else:
        _exchange(a, 0, 1, st)


@njit(cache=True, nogil=True)
def tree_swap_kernel(a, s_anchor, n_small, l_anchor, n_large, k_small, k_large,
                     depth, frames, st):
    # Explicit-stack form of the recursive pre-pass: each frame is
    # (kS, kL, jS, jL, phase); phase 0 = enter, 1 = first child done,
    # 2 = sibling done.  Frame f sits at call depth ``depth + f + 1``.
    top = 0
    frames[0, 0] = k_small
    frames[0, 1] = k_large
    frames[0, 4] = 0
    while top >= 0:
        ks = frames[top, 0]
        kl = frames[top, 1]
        phase = frames[top, 4]
        if phase == 0:
            tick(st, TREE_SWAPS, 1)
            note_depth(st, depth + top + 1)
            js = 2 * ks
            jl = 2 * kl
            if js <= n_small and jl <= n_large:
                cs = load(a, s_anchor - (js - 1), st)
                if js < n_small:
                    c1 = load(a, s_anchor - js, st)
                    tick(st, COMPARISONS, 1)
                    if c1 > cs:
                        js += 1
                        cs = c1
                cl = load(a, l_anchor + (jl - 1), st)
                if jl < n_large:
                    c1 = load(a, l_anchor + jl, st)
                    tick(st, COMPARISONS, 1)
                    if c1 < cl:
                        jl += 1
                        cl = c1
                tick(st, COMPARISONS, 1)
                if cs > cl:
                    frames[top, 2] = js
                    frames[top, 3] = jl
                    frames[top, 4] = 1
                    top += 1
                    frames[top, 0] = js
                    frames[top, 1] = jl
                    frames[top, 4] = 0
                    continue
        elif phase == 1:
            ss = frames[top, 2] ^ 1
            sl = frames[top, 3] ^ 1
            if ss <= n_small and sl <= n_large:
                xs = load(a, s_anchor - (ss - 1), st)
                yl = load(a, l_anchor + (sl - 1), st)
                tick(st, COMPARISONS, 1)
                if xs > yl:
                    frames[top, 4] = 2
                    top += 1
                    frames[top, 0] = ss
                    frames[top, 1] = sl
                    frames[top, 4] = 0
                    continue
        _exchange(a, s_anchor - (ks - 1), l_anchor + (kl - 1), st)
        sift_kernel(a, s_anchor, -1, n_small, True, ks, st)
        sift_kernel(a, l_anchor, 1, n_large, False, kl, st)
        top -= 1


@njit(cache=True, nogil=True)
def exchange_kernel(a, s_anchor, n_small, l_anchor, n_large, depth, st):
    if n_small == 0 or n_large == 0:
        return 0
    frames = np.empty((_FRAMES, 5), dtype=np.int64)
    swaps = 0
    while True:
        x = load(a, s_anchor, st)
        y = load(a, l_anchor, st)
        tick(st, COMPARISONS, 1)
        if not x > y:
            break
        tree_swap_kernel(a, s_anchor, n_small, l_anchor, n_large, 1, 1, depth, frames, st)
        swaps += 1
    return swaps


@njit(cache=True, nogil=True)
def build_halves_kernel(a, off, n, which, st):
    """Build the small (which=0), large (which=1) or both (which=2) subheaps
    of the region starting at 0-based slot ``off``."""
    n_small = (n // 2) & ~1
    n_large = n - n_small
    if which != 1:
        build_kernel(a, off + n_small - 1, -1, n_small, True, st)
    if which != 0:
        build_kernel(a, off + n_small, 1, n_large, False, st)


@njit(cache=True, nogil=True)
def set_aside_kernel(a, off, n, st):
    n_small = (n // 2) & ~1
    n_large = n - n_small
    s_anchor = off + n_small - 1
    l_anchor = off + n_small
    if n_small >= 3:
        # small side's second largest goes next to its root
        x = load(a, s_anchor - 1, st)
        y = load(a, s_anchor - 2, st)
        tick(st, COMPARISONS, 1)
        if x < y:
            store(a, s_anchor - 1, y, st)
            store(a, s_anchor - 2, x, st)
            tick(st, MOVES, 2)
    if n_large >= 3:
        _order_pair(a, l_anchor + 1, l_anchor + 2, st)


@njit(cache=True, nogil=True)
def partition_step_kernel(a, off, n, depth, st):
    """Build both subheaps, exchange, set aside.  Requires n >= 4."""
    n_small = (n // 2) & ~1
    n_large = n - n_small
    build_halves_kernel(a, off, n, 2, st)
    swaps = exchange_kernel(a, off + n_small - 1, n_small, off + n_small, n_large, depth, st)
    set_aside_kernel(a, off, n, st)
    return swaps


@njit(cache=True, nogil=True)
def small_region_kernel(a, off, n, st):
    """Sort a region of length 2 or 3 directly."""
    if n == 2:
        _order_pair(a, off, off + 1, st)
    else:
        build_kernel(a, off, 1, 3, False, st)
        _order_pair(a, off + 1, off + 2, st)


@njit(cache=True, nogil=True)
def partition_heap_kernel(a, off, n, depth, st):
    # Work list in place of the two recursive calls; the small side is
    # pushed last so it is processed first, as the recursion would.
    stack = np.empty((2 * _FRAMES + 4, 3), dtype=np.int64)
    stack[0, 0] = off
    stack[0, 1] = n
    stack[0, 2] = depth
    top = 0
    while top >= 0:
        o = stack[top, 0]
        m = stack[top, 1]
        d = stack[top, 2]
        top -= 1
        note_depth(st, d)
        if m < 4:
            small_region_kernel(a, o, m, st)
            continue
        partition_step_kernel(a, o, m, d, st)
        n_small = (m // 2) & ~1
        n_large = m - n_small
        if n_large > 3:
            top += 1
            stack[top, 0] = o + n_small + 2
            stack[top, 1] = n_large - 2
            stack[top, 2] = d + 1
        if n_small > 3:
            top += 1
            stack[top, 0] = o
            stack[top, 1] = n_small - 2
            stack[top, 2] = d + 1


@njit(cache=True, nogil=True)
def dualheap_prelude_kernel(a, n, st):
    """Whole-array min-heap plus the first two set-asides (n >= 3)."""
    build_kernel(a, 0, 1, n, False, st)
    _order_pair(a, 1, 2, st)


@njit(cache=True, nogil=True)
def dualheap_sort_kernel(a, n, st):
    if n <= 1:
        return
    if n == 2:
        _order_pair(a, 0, 1, st)
        return
    dualheap_prelude_kernel(a, n, st)
    if n > 3:
        partition_heap_kernel(a, 2, n - 2, 1, st)


# -- public API -----------------------------------------------------------------


def _outcome(arr, ctx: CountingContext) -> SortOutcome:
    return SortOutcome(ctx.counters, len(arr))


def heapsort(arr: np.ndarray, ctx: CountingContext | None = None) -> SortOutcome:
    """Williams heapsort, ascending, in place."""
    check_array(arr)
    ctx = _ctx(ctx)
    heapsort_kernel(arr, len(arr), ctx.state)
    return _outcome(arr, ctx)


def heapsort_modified(arr: np.ndarray, ctx: CountingContext | None = None) -> SortOutcome:
    """Heapsort placing two elements per pass: the root, then the larger
    of its children, followed by two sifts on the shrunken heap."""
    check_array(arr)
    ctx = _ctx(ctx)
    heapsort_modified_kernel(arr, len(arr), ctx.state)
    return _outcome(arr, ctx)


def dualheap_sort(arr: np.ndarray, ctx: CountingContext | None = None) -> SortOutcome:
    """Sort by recursive exact-median partitioning between opposing heaps.

    Counts accumulate into ``ctx``; the returned counters are the context's
    totals after the run.
    """
    check_array(arr)
    ctx = _ctx(ctx)
    dualheap_sort_kernel(arr, len(arr), ctx.state)
    return _outcome(arr, ctx)


def _check_region(arr, region: PartitionRegion) -> None:
    if region.n < 2:
        raise ValueError(f"partition region needs n >= 2, got {region.n}")
    if region.last > len(arr):
        raise ValueError(f"region {region.offset}..{region.last} outside array 1..{len(arr)}")


def partition_heap(arr: np.ndarray, region: PartitionRegion,
                   ctx: CountingContext | None = None, depth: int = 1) -> None:
    """Sort ``region`` by recursive partitioning.  ``depth`` is the call
    depth this activation counts as."""
    check_array(arr)
    _check_region(arr, region)
    partition_heap_kernel(arr, region.offset - 1, region.n, depth, _ctx(ctx).state)


def partition_step(arr: np.ndarray, region: PartitionRegion,
                   ctx: CountingContext | None = None, depth: int = 1) -> int:
    """One non-recursive partition level: build, exchange, set aside.

    Regions shorter than 4 are sorted outright.  Returns the number of
    top-level tree swaps.
    """
    check_array(arr)
    _check_region(arr, region)
    ctx = _ctx(ctx)
    if region.n < 4:
        small_region_kernel(arr, region.offset - 1, region.n, ctx.state)
        return 0
    return int(partition_step_kernel(arr, region.offset - 1, region.n, depth, ctx.state))


def _check_pair(arr, small: HeapView, large: HeapView) -> None:
    if small.kind is not Kind.MAX or small.direction is not Direction.LEFTWARD:
        raise ValueError("small view must be a leftward max-heap")
    if large.kind is not Kind.MIN or large.direction is not Direction.RIGHTWARD:
        raise ValueError("large view must be a rightward min-heap")
    if small.size and large.size and small.region_base + 1 != large.region_base:
        raise ValueError("subheap roots must be adjacent")
    _check_view(arr, small)
    _check_view(arr, large)


def exchange_phase(arr: np.ndarray, small: HeapView, large: HeapView,
                   ctx: CountingContext | None = None, depth: int = 0) -> int:
    """Tree-swap root pairs until max(small) <= min(large).

    Returns the number of top-level tree swaps.
    """
    check_array(arr)
    _check_pair(arr, small, large)
    return int(exchange_kernel(arr, small.region_base - 1, small.size,
                               large.region_base - 1, large.size, depth, _ctx(ctx).state))


def tree_swap(arr: np.ndarray, small: HeapView, large: HeapView, k_small: int, k_large: int,
              ctx: CountingContext | None = None, depth: int = 0) -> None:
    check_array(arr)
    _check_pair(arr, small, large)
    if not (1 <= k_small <= small.size and 1 <= k_large <= large.size):
        raise ValueError(f"nodes ({k_small}, {k_large}) outside the views")
    frames = np.empty((_FRAMES, 5), dtype=np.int64)
    tree_swap_kernel(arr, small.region_base - 1, small.size, large.region_base - 1,
                     large.size, k_small, k_large, depth, frames, _ctx(ctx).state)


def dualheap_partition(arr: np.ndarray, region: PartitionRegion,
                       ctx: CountingContext | None = None) -> int:
    """Exact-position split: afterwards positions ``1..nS`` of the region
    hold its ``nS`` smallest values.  Returns ``nS``."""
    check_array(arr)
    _check_region(arr, region)
    ctx = _ctx(ctx)
    build_halves_kernel(arr, region.offset - 1, region.n, 2, ctx.state)
    exchange_phase(arr, region.small_view(), region.large_view(), ctx)
    return region.n_small


SORTERS = {
    "heapsort": heapsort,
    "heapsort_modified": heapsort_modified,
    "dualheap": dualheap_sort,
}
