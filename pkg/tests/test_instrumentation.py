import io
from collections import OrderedDict

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dualheap.heapcore import min_rightward, sift_down
from dualheap.instrumentation import (
    CacheConfig,
    CacheStats,
    CountingContext,
    EventKind,
    OpCounters,
    TraceEvent,
    cache_simulate,
    counters_merge,
    dump_trace,
    load_trace,
    trace_record,
)
from dualheap.oracle import Distribution, InputSpec, gen_input
from dualheap.sorters import dualheap_sort, heapsort, heapsort_modified

from conftest import u64

R, W = EventKind.READ, EventKind.WRITE


def lru_reference(indices, cfg):
    """Dictionary-per-set LRU, written independently of the kernel."""
    sets = [OrderedDict() for _ in range(cfg.num_sets)]
    misses = 0
    for i in indices:
        line = (i - 1) * cfg.element_bytes // cfg.line_bytes
        s = sets[line % cfg.num_sets]
        if line in s:
            s.move_to_end(line)
        else:
            misses += 1
            if len(s) == cfg.ways:
                s.popitem(last=False)
            s[line] = True
    return CacheStats(len(indices), misses)


# -- counters ---------------------------------------------------------------


def test_merge_identity_commutativity_arithmetic():
    x = OpCounters(3, 4, 5, 6)
    assert counters_merge(x, OpCounters()) == x
    a, b = OpCounters(1, 2, 3, 4), OpCounters(5, 6, 7, 2)
    assert counters_merge(a, b) == counters_merge(b, a) == OpCounters(6, 8, 10, 4)


@given(*[st.tuples(*[st.integers(0, 2**40)] * 4)] * 3)
def test_merge_is_associative(a, b, c):
    a, b, c = OpCounters(*a), OpCounters(*b), OpCounters(*c)
    assert counters_merge(counters_merge(a, b), c) == counters_merge(a, counters_merge(b, c))


def test_merge_fails_loudly_on_overflow():
    big = OpCounters(comparisons=2**63 - 1)
    with pytest.raises(OverflowError):
        counters_merge(big, OpCounters(comparisons=1))
    with pytest.raises(ValueError):
        OpCounters(moves=-1)


# -- tracing -----------------------------------------------------------------


def test_disabled_context_keeps_no_trace():
    ctx = CountingContext()
    trace_record(ctx, TraceEvent(R, 1))
    assert ctx.events == []
    sift_down(u64([3, 1, 2]), min_rightward(1, 3), 1, ctx)
    assert ctx.events == []


def test_trace_record_appends_in_order():
    ctx = CountingContext(trace=True)
    trace_record(ctx, TraceEvent(R, 5))
    trace_record(ctx, TraceEvent(W, 2))
    assert ctx.events == [TraceEvent(R, 5), TraceEvent(W, 2)]
    with pytest.raises(ValueError):
        trace_record(ctx, TraceEvent(R, 0))


def test_sift_on_min_heap_reads_three_nodes_and_writes_nothing():
    ctx = CountingContext(trace=True)
    sift_down(u64([1, 2, 3]), min_rightward(1, 3), 1, ctx)
    assert ctx.events == [TraceEvent(R, 1), TraceEvent(R, 2), TraceEvent(R, 3)]


def test_heapsort_trace_ends_with_exchange_writes():
    ctx = CountingContext(trace=True)
    heapsort(u64([2, 1]), ctx)
    assert ctx.events[-2:] == [TraceEvent(W, 1), TraceEvent(W, 2)]
    assert ctx.counters.moves == 2


@pytest.mark.parametrize("sort", [heapsort, heapsort_modified, dualheap_sort])
def test_counters_independent_of_tracing(sort):
    data = gen_input(InputSpec(Distribution.UNIFORM, 3000, seed=9))
    plain, traced, cached = CountingContext(), CountingContext(trace=True), \
        CountingContext(cache=CacheConfig())
    for ctx in (plain, traced, cached):
        sort(data.copy(), ctx)
    assert plain.counters == traced.counters == cached.counters
    # every move is one write; every write in these kernels is a move
    writes = sum(1 for e in traced.events if e.kind == W)
    assert writes == plain.counters.moves


def test_trace_dump_format_round_trip():
    events = [TraceEvent(R, 1), TraceEvent(W, 17), TraceEvent(R, 3)]
    buf = io.StringIO()
    dump_trace(events, buf)
    assert buf.getvalue() == "R 1\nW 17\nR 3\n"
    buf.seek(0)
    assert load_trace(buf) == events
    with pytest.raises(ValueError, match="line 2"):
        load_trace(io.StringIO("R 1\nX 2\n"))


# -- cache model -------------------------------------------------------------


def test_cache_examples():
    cfg = CacheConfig()
    assert cache_simulate([], cfg) == CacheStats(0, 0)
    assert cache_simulate([], cfg).miss_rate == 0.0
    ten = cache_simulate([TraceEvent(R, 5)] * 10, cfg)
    assert (ten.accesses, ten.misses) == (10, 1)
    tiny = CacheConfig(line_bytes=64, num_sets=1, ways=1)
    alternating = [TraceEvent(R, 1 if i % 2 == 0 else 9) for i in range(20)]
    assert cache_simulate(alternating, tiny).misses == 20


@pytest.mark.parametrize("kw", [dict(line_bytes=48), dict(num_sets=3), dict(ways=0),
                                dict(element_bytes=0)])
def test_cache_config_validation(kw):
    with pytest.raises(ValueError):
        CacheConfig(**kw)


@given(st.lists(st.integers(1, 400), max_size=300),
       st.sampled_from([8, 16, 64]), st.sampled_from([1, 2, 4]), st.integers(1, 4),
       st.sampled_from([4, 8, 12]))
def test_cache_matches_reference_lru(indices, line, sets, ways, elem):
    cfg = CacheConfig(line, sets, ways, elem)
    events = [TraceEvent(R, i) for i in indices]
    assert cache_simulate(events, cfg) == lru_reference(indices, cfg)


def test_cache_simulate_is_pure():
    events = [TraceEvent(R, i) for i in (1, 100, 1, 200, 300, 1)]
    cfg = CacheConfig(num_sets=1, ways=2)
    assert cache_simulate(events, cfg) == cache_simulate(events, cfg)


@pytest.mark.parametrize("sort", [heapsort, dualheap_sort])
def test_online_cache_equals_replayed_trace(sort):
    data = gen_input(InputSpec(Distribution.UNIFORM, 5000, seed=2))
    cfg = CacheConfig(line_bytes=64, num_sets=8, ways=2)
    ctx = CountingContext(trace=True, cache=cfg)
    sort(data.copy(), ctx)
    assert ctx.cache_stats == cache_simulate(ctx.events, cfg)
    assert ctx.cache_stats == cache_simulate(ctx.trace_codes(), cfg)
    indices = [e.index for e in ctx.events[:20000]]
    assert cache_simulate(ctx.events[:20000], cfg) == lru_reference(indices, cfg)


@pytest.mark.parametrize("sort", [heapsort, dualheap_sort])
def test_more_ways_do_not_add_misses_on_recorded_traces(sort):
    data = gen_input(InputSpec(Distribution.UNIFORM, 4000, seed=5))
    ctx = CountingContext(trace=True)
    sort(data, ctx)
    codes = ctx.trace_codes()
    misses = [cache_simulate(codes, CacheConfig(64, 4, w)).misses for w in (1, 2, 4, 8)]
    assert misses == sorted(misses, reverse=True)


def test_null_context_counts_nothing():
    ctx = CountingContext.null()
    dualheap_sort(gen_input(InputSpec(Distribution.UNIFORM, 100)), ctx)
    assert ctx.counters == OpCounters()
    with pytest.raises(ValueError):
        CountingContext(counting=False, trace=True)
