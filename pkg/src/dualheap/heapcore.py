"""Binary-heap primitives over oriented views of a shared array.

Positions are 1-based throughout the public API; physical slot of
position ``i`` is ``arr[i - 1]``.  A :class:`HeapView` maps heap node ``k``
to a position either growing rightward from its anchor (``anchor + k - 1``)
or leftward (``anchor - k + 1``).  The dualheap partition uses a leftward
max-heap of small values whose root sits right next to the root of a
rightward min-heap of large values.

Kernels take ``anchor`` as a 0-based physical slot and ``step`` as +1/-1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .instrumentation import COMPARISONS, MOVES, CountingContext, load, store, tick


class Kind(enum.Enum):
    MAX = "max"
    MIN = "min"


class Direction(enum.Enum):
    LEFTWARD = -1
    RIGHTWARD = 1


@dataclass(frozen=True)
class HeapView:
    region_base: int  # 1-based position of node 1
    size: int
    kind: Kind
    direction: Direction

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"view size must be >= 0, got {self.size}")
        if self.region_base < 1:
            raise ValueError(f"region_base must be >= 1, got {self.region_base}")

    def position(self, k: int) -> int:
        return self.region_base + self.direction.value * (k - 1)

    @property
    def footprint(self) -> tuple[int, int]:
        """Inclusive 1-based position range covered by nodes 1..size."""
        if self.size == 0:
            return (self.region_base, self.region_base - 1)
        far = self.position(self.size)
        return (min(self.region_base, far), max(self.region_base, far))

    def with_size(self, size: int) -> HeapView:
        return replace(self, size=size)

    def nodes(self, arr) -> list:
        """Node values 1..size, in node order."""
        return [arr[self.position(k) - 1] for k in range(1, self.size + 1)]

    # kernel arguments: (anchor, step, size, is_max)
    def kernel_args(self) -> tuple[int, int, int, bool]:
        return (self.region_base - 1, self.direction.value, self.size,
                self.kind is Kind.MAX)


def max_rightward(base: int, size: int) -> HeapView:
    return HeapView(base, size, Kind.MAX, Direction.RIGHTWARD)


def min_rightward(base: int, size: int) -> HeapView:
    return HeapView(base, size, Kind.MIN, Direction.RIGHTWARD)


def max_leftward(base: int, size: int) -> HeapView:
    return HeapView(base, size, Kind.MAX, Direction.LEFTWARD)


@njit(cache=True, nogil=True)
def superior(x, y, is_max):
    if is_max:
        return x > y
    return x < y


@njit(cache=True, nogil=True)
def sift_kernel(a, anchor, step, size, is_max, k, st):
    # Hole-based descent; the sibling is read only when it exists.
    if 2 * k > size:
        return
    v = load(a, anchor + step * (k - 1), st)
    hole = k
    while True:
        j = 2 * hole
        if j > size:
            break
        pj = anchor + step * (j - 1)
        c = load(a, pj, st)
        if j < size:
            c1 = load(a, pj + step, st)
            tick(st, COMPARISONS, 1)
            if superior(c1, c, is_max):
                j += 1
                c = c1
        tick(st, COMPARISONS, 1)
        if not superior(c, v, is_max):
            break
        store(a, anchor + step * (hole - 1), c, st)
        tick(st, MOVES, 1)
        hole = j
    if hole != k:
        store(a, anchor + step * (hole - 1), v, st)
        tick(st, MOVES, 1)


@njit(cache=True, nogil=True)
def build_kernel(a, anchor, step, size, is_max, st):
    for i in range(size // 2, 0, -1):
        sift_kernel(a, anchor, step, size, is_max, i, st)


def check_array(arr) -> np.ndarray:
    if not isinstance(arr, np.ndarray) or arr.ndim != 1:
        raise TypeError("expected a 1-d numpy array (algorithms work in place)")
    if not arr.flags.c_contiguous or not arr.flags.writeable:
        raise ValueError("array must be contiguous and writeable")
    return arr


def _check_view(arr, view: HeapView) -> None:
    lo, hi = view.footprint
    if view.size and (lo < 1 or hi > len(arr)):
        raise ValueError(f"view footprint {lo}..{hi} outside array 1..{len(arr)}")


def _ctx(ctx: CountingContext | None) -> CountingContext:
    return CountingContext.null() if ctx is None else ctx


def sift_down(arr: np.ndarray, view: HeapView, k: int, ctx: CountingContext | None = None) -> None:
    """Restore the heap condition at node ``k``, assuming both subtrees hold it.

    Descends only past strictly superior children; equal children resolve to
    the lower node index.
    """
    check_array(arr)
    _check_view(arr, view)
    if not 1 <= k <= view.size:
        raise ValueError(f"node {k} outside 1..{view.size}")
    sift_kernel(arr, *view.kernel_args(), k, _ctx(ctx).state)


def build_heap(arr: np.ndarray, view: HeapView, ctx: CountingContext | None = None) -> None:
    check_array(arr)
    _check_view(arr, view)
    build_kernel(arr, *view.kernel_args(), _ctx(ctx).state)


def heap_check(arr, view: HeapView) -> bool:
    """True iff no node is superior to its parent.  Touches no counters."""
    if view.size < 2:
        return True
    _check_view(arr, view)
    a = np.asarray(arr)
    k = np.arange(2, view.size + 1)
    step = view.direction.value
    child = a[view.region_base - 1 + step * (k - 1)]
    parent = a[view.region_base - 1 + step * (k // 2 - 1)]
    if view.kind is Kind.MAX:
        return bool((parent >= child).all())
    return bool((parent <= child).all())
