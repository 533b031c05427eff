"""Operation counting, access tracing and a set-associative LRU cache model.

Kernels never touch the array or the counters directly: every key load,
key store, comparison and move goes through the hooks defined here
(:func:`load`, :func:`store`, :func:`tick`, :func:`note_depth`).  The hooks
are numba overloads that specialise on the *type* of the state tuple a
:class:`CountingContext` hands to the kernel, so a null context compiles
them down to plain array accesses.

State tuple layout: ``(counts, trace, cache)`` where each slot is either
``None`` or

* ``counts``: int64[4] -> comparisons, moves, tree_swaps, max_depth
* ``trace``: numba typed List[int64] of encoded events (``index*2 + kind``)
* ``cache``: int64 state array of the online cache simulator
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from typing import Iterable, NamedTuple, TextIO

import numpy as np
from numba import njit, types
from numba.extending import overload
from numba.typed import List

COMPARISONS, MOVES, TREE_SWAPS, MAX_DEPTH = range(4)

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class OpCounters:
    comparisons: int = 0
    moves: int = 0
    tree_swaps: int = 0
    max_depth: int = 0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v < 0:
                raise ValueError(f"{f.name} must be non-negative, got {v}")
            if v > _INT64_MAX:
                raise OverflowError(f"{f.name} overflowed 64 bits")

    def merge(self, other: OpCounters) -> OpCounters:
        return counters_merge(self, other)

    @property
    def operations(self) -> int:
        """Comparisons plus moves, the quantity plotted per test case."""
        return self.comparisons + self.moves

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.comparisons, self.moves, self.tree_swaps, self.max_depth)


def counters_merge(a: OpCounters, b: OpCounters) -> OpCounters:
    """Join two counter sets: sums for the event counts, max for depth.

    Raises OverflowError rather than wrapping.
    """
    return OpCounters(
        a.comparisons + b.comparisons,
        a.moves + b.moves,
        a.tree_swaps + b.tree_swaps,
        max(a.max_depth, b.max_depth),
    )


class EventKind(enum.IntEnum):
    READ = 0
    WRITE = 1


class TraceEvent(NamedTuple):
    kind: EventKind
    index: int  # 1-based logical array position

    def encode(self) -> int:
        if self.index < 1:
            raise ValueError(f"trace index must be >= 1, got {self.index}")
        return self.index * 2 + int(self.kind)

    @classmethod
    def decode(cls, code: int) -> TraceEvent:
        return cls(EventKind(code & 1), code >> 1)


def _is_pow2(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


@dataclass(frozen=True)
class CacheConfig:
    """Default: 32 KiB, 64-byte lines, 8 ways, 8-byte elements."""

    line_bytes: int = 64
    num_sets: int = 64
    ways: int = 8
    element_bytes: int = 8

    def __post_init__(self):
        if not _is_pow2(self.line_bytes):
            raise ValueError(f"line_bytes must be a power of two, got {self.line_bytes}")
        if not _is_pow2(self.num_sets):
            raise ValueError(f"num_sets must be a power of two, got {self.num_sets}")
        if self.ways < 1:
            raise ValueError(f"ways must be >= 1, got {self.ways}")
        if self.element_bytes < 1:
            raise ValueError(f"element_bytes must be >= 1, got {self.element_bytes}")

    @property
    def capacity_bytes(self) -> int:
        return self.line_bytes * self.num_sets * self.ways

    def line_of(self, index: int) -> int:
        return (index - 1) * self.element_bytes // self.line_bytes


@dataclass(frozen=True)
class CacheStats:
    accesses: int = 0
    misses: int = 0

    @property
    def miss_rate(self) -> float:
        return self.misses / self.accesses if self.accesses else 0.0


# -- cache model --------------------------------------------------------------

# Cache state is one int64 array: header slots, then tags, then LRU stamps.
_H_SHIFT, _H_SETS, _H_WAYS, _H_ELEM, _H_CLOCK, _H_ACCESSES, _H_MISSES = range(7)
_HEADER = 8


def _new_cache_state(cfg: CacheConfig) -> np.ndarray:
    slots = cfg.num_sets * cfg.ways
    cs = np.zeros(_HEADER + 2 * slots, dtype=np.int64)
    cs[:7] = [cfg.line_bytes.bit_length() - 1, cfg.num_sets, cfg.ways,
              cfg.element_bytes, 0, 0, 0]
    cs[_HEADER:_HEADER + slots] = -1
    return cs


@njit(cache=True, nogil=True)
def cache_touch(cs, index):
    line = ((index - 1) * cs[_H_ELEM]) >> cs[_H_SHIFT]
    ways = cs[_H_WAYS]
    base = _HEADER + (line & (cs[_H_SETS] - 1)) * ways
    stamp_off = cs[_H_SETS] * ways
    cs[_H_CLOCK] += 1
    cs[_H_ACCESSES] += 1
    now = cs[_H_CLOCK]
    victim = base
    for w in range(base, base + ways):
        if cs[w] == line:
            cs[w + stamp_off] = now
            return
        if cs[w + stamp_off] < cs[victim + stamp_off]:
            victim = w
    cs[_H_MISSES] += 1
    cs[victim] = line
    cs[victim + stamp_off] = now


@njit(cache=True, nogil=True)
def _simulate_codes(codes, cs):
    for i in range(codes.size):
        cache_touch(cs, codes[i] >> 1)


def cache_simulate(trace: Iterable[TraceEvent] | np.ndarray, cfg: CacheConfig) -> CacheStats:
    """Replay a trace through a fresh cache; reads and writes both allocate.

    ``trace`` may be a sequence of :class:`TraceEvent` or an int64 array of
    encoded events.
    """
    if isinstance(trace, np.ndarray):
        codes = trace.astype(np.int64, copy=False)
    else:
        codes = np.fromiter((e.encode() for e in trace), dtype=np.int64)
    if codes.size and codes.min() < 2:
        raise ValueError("trace indices must be >= 1")
    cs = _new_cache_state(cfg)
    _simulate_codes(codes, cs)
    return CacheStats(int(cs[_H_ACCESSES]), int(cs[_H_MISSES]))


# -- kernel hooks ---------------------------------------------------------------


# The plain-Python bodies below run only with NUMBA_DISABLE_JIT=1; compiled
# kernels get the overloads further down.


def tick(st, slot, amount):
    """Add ``amount`` to counter ``slot``."""
    if st[0] is not None:
        st[0][slot] += amount


def note_depth(st, depth):
    """Raise the max-depth counter to ``depth``."""
    if st[0] is not None and depth > st[0][MAX_DEPTH]:
        st[0][MAX_DEPTH] = depth


def _py_event(st, p, kind):
    if st[1] is not None:
        st[1].append((p + 1) * 2 + kind)
    if st[2] is not None:
        cache_touch(st[2], p + 1)


def load(a, p, st):
    """Read physical slot ``p`` of ``a``."""
    _py_event(st, p, 0)
    return a[p]


def store(a, p, v, st):
    """Write ``v`` into physical slot ``p`` of ``a``."""
    _py_event(st, p, 1)
    a[p] = v


def _absent(t) -> bool:
    return t is None or isinstance(t, types.NoneType)


@overload(tick)
def _ov_tick(st, slot, amount):
    if _absent(st.types[0]):
        return lambda st, slot, amount: None

    def impl(st, slot, amount):
        st[0][slot] += amount

    return impl


@overload(note_depth)
def _ov_note_depth(st, depth):
    if _absent(st.types[0]):
        return lambda st, depth: None

    def impl(st, depth):
        if depth > st[0][3]:
            st[0][3] = depth

    return impl


@njit(cache=True, nogil=True)
def _emit_trace(st, p, kind):
    st[1].append((p + 1) * 2 + kind)


@njit(cache=True, nogil=True)
def _emit_cache(st, p):
    cache_touch(st[2], p + 1)


def _sinks(st):
    return not _absent(st.types[1]), not _absent(st.types[2])


@overload(load)
def _ov_load(a, p, st):
    tracing, caching = _sinks(st)
    if tracing and caching:
        def impl(a, p, st):
            _emit_trace(st, p, 0)
            _emit_cache(st, p)
            return a[p]
    elif tracing:
        def impl(a, p, st):
            _emit_trace(st, p, 0)
            return a[p]
    elif caching:
        def impl(a, p, st):
            _emit_cache(st, p)
            return a[p]
    else:
        def impl(a, p, st):
            return a[p]
    return impl


@overload(store)
def _ov_store(a, p, v, st):
    tracing, caching = _sinks(st)
    if tracing and caching:
        def impl(a, p, v, st):
            _emit_trace(st, p, 1)
            _emit_cache(st, p)
            a[p] = v
    elif tracing:
        def impl(a, p, v, st):
            _emit_trace(st, p, 1)
            a[p] = v
    elif caching:
        def impl(a, p, v, st):
            _emit_cache(st, p)
            a[p] = v
    else:
        def impl(a, p, v, st):
            a[p] = v
    return impl


# -- context ------------------------------------------------------------------


class CountingContext:
    """Per-task measurement state handed to every algorithm.

    ``CountingContext()`` counts; ``CountingContext.null()`` measures
    nothing (used for wall-clock timing); ``trace=True`` records every
    logical array access; ``cache=cfg`` feeds accesses straight into a
    cache model without storing them.
    """

    def __init__(self, *, counting: bool = True, trace: bool = False,
                 cache: CacheConfig | None = None):
        if (trace or cache is not None) and not counting:
            raise ValueError("tracing requires a counting context")
        self.counting = counting
        self.cache_config = cache
        self._counts = np.zeros(4, dtype=np.int64) if counting else None
        self._trace = List.empty_list(types.int64) if trace else None
        self._cache = _new_cache_state(cache) if cache is not None else None

    @classmethod
    def null(cls) -> CountingContext:
        return cls(counting=False)

    @property
    def tracing(self) -> bool:
        return self._trace is not None

    @property
    def state(self):
        return (self._counts, self._trace, self._cache)

    @property
    def counters(self) -> OpCounters:
        if self._counts is None:
            return OpCounters()
        c = self._counts
        if (c < 0).any():
            raise OverflowError("kernel counter wrapped")
        return OpCounters(*(int(x) for x in c))

    def add(self, counters: OpCounters) -> None:
        """Merge a child task's counters into this context."""
        if self._counts is None:
            return
        merged = counters_merge(self.counters, counters)
        self._counts[:] = merged.as_tuple()

    def spawn(self) -> CountingContext:
        """Fresh private context for a forked task, same capabilities.

        Cache-model contexts cannot be split; traced ones can, but traces
        are only meaningful when the tasks run one at a time.
        """
        if self._cache is not None:
            raise ValueError("cache-model contexts cannot be forked")
        return CountingContext(counting=self.counting, trace=self.tracing)

    def absorb(self, child: CountingContext) -> None:
        """Join a spawned context back: merge counters, append its trace."""
        self.add(child.counters)
        if self._trace is not None and child._trace is not None:
            self._trace.extend(child._trace)

    def trace_codes(self) -> np.ndarray:
        if self._trace is None:
            return np.empty(0, dtype=np.int64)
        return np.asarray(self._trace, dtype=np.int64)

    @property
    def events(self) -> list[TraceEvent]:
        return [TraceEvent.decode(int(c)) for c in self.trace_codes()]

    @property
    def cache_stats(self) -> CacheStats | None:
        if self._cache is None:
            return None
        return CacheStats(int(self._cache[_H_ACCESSES]), int(self._cache[_H_MISSES]))


def trace_record(ctx: CountingContext, event: TraceEvent) -> None:
    """Append ``event`` to the context's trace; no-op when not tracing."""
    code = event.encode()
    if ctx._trace is not None:
        ctx._trace.append(code)
    if ctx._cache is not None:
        cache_touch(ctx._cache, event.index)


def dump_trace(events: Iterable[TraceEvent], fp: TextIO) -> None:
    """Write one ``R <index>`` / ``W <index>`` line per event."""
    for e in events:
        fp.write(f"{'R' if e.kind == EventKind.READ else 'W'} {e.index}\n")


def load_trace(fp: TextIO) -> list[TraceEvent]:
    out = []
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("R", "W") or not parts[1].isdigit():
            raise ValueError(f"line {lineno}: expected 'R <index>' or 'W <index>', got {line!r}")
        index = int(parts[1])
        if index < 1:
            raise ValueError(f"line {lineno}: index must be >= 1")
        out.append(TraceEvent(EventKind.READ if parts[0] == "R" else EventKind.WRITE, index))
    return out
