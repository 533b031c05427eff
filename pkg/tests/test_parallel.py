import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualheap.instrumentation import CacheConfig, CountingContext, EventKind
from dualheap.oracle import Distribution, InputSpec, gen_input
from dualheap.parallel import ParallelPolicy, dualheap_sort_parallel
from dualheap.sorters import dualheap_sort


def sequential(data):
    a = data.copy()
    ctx = CountingContext()
    dualheap_sort(a, ctx)
    return a, ctx.counters


@pytest.mark.parametrize("workers", [1, 2, 3, 8])
@pytest.mark.parametrize("cutoff", [4, 64, 4096])
def test_matches_sequential(workers, cutoff):
    for seed in (1, 2, 3):
        data = gen_input(InputSpec(Distribution.UNIFORM, 20000 + seed, seed=seed))
        want, counters = sequential(data)
        a = data.copy()
        ctx = CountingContext()
        out = dualheap_sort_parallel(a, ctx, ParallelPolicy(workers, cutoff))
        assert np.array_equal(a, want)
        assert out.counters == counters


@settings(max_examples=30)
@given(st.lists(st.integers(0, 30), max_size=400), st.integers(1, 4), st.integers(4, 40))
def test_schedule_independence(vals, workers, cutoff):
    data = np.array(vals, dtype=np.uint64)
    want, counters = sequential(data)
    for _ in range(2):
        a = data.copy()
        ctx = CountingContext()
        dualheap_sort_parallel(a, ctx, ParallelPolicy(workers, cutoff))
        assert np.array_equal(a, want) and ctx.counters == counters


@pytest.mark.parametrize("workers", [1, 8])
def test_sorted_input_moves_nothing(workers):
    a = np.arange(50000, dtype=np.uint64)
    ctx = CountingContext()
    dualheap_sort_parallel(a, ctx, ParallelPolicy(workers, 256))
    assert ctx.counters.moves == 0


def test_tasks_stay_inside_their_footprint():
    data = gen_input(InputSpec(Distribution.UNIFORM, 3000, seed=4))
    seen = []

    def observer(kind, first, last, ctx):
        idx = [e.index for e in ctx.events]
        seen.append(kind)
        assert all(first <= i <= last for i in idx), (kind, first, last)

    a = data.copy()
    ctx = CountingContext(trace=True)
    dualheap_sort_parallel(a, ctx, ParallelPolicy(1, 16), observer=observer)
    assert {"prelude", "region", "build_small", "build_large"} <= set(seen)
    assert np.array_equal(a, np.sort(data))
    # joined trace holds every access made by every task
    ref = CountingContext(trace=True)
    dualheap_sort(data.copy(), ref)
    assert sorted(e.index for e in ctx.events if e.kind == EventKind.WRITE) == \
        sorted(e.index for e in ref.events if e.kind == EventKind.WRITE)


def test_policy_validation_and_context_restrictions():
    with pytest.raises(ValueError):
        ParallelPolicy(max_concurrency=0)
    with pytest.raises(ValueError):
        ParallelPolicy(sequential_cutoff=3)
    a = np.arange(100, dtype=np.uint64)
    with pytest.raises(ValueError):
        dualheap_sort_parallel(a, CountingContext(trace=True), ParallelPolicy(2, 4))
    with pytest.raises(ValueError):
        dualheap_sort_parallel(a, CountingContext(cache=CacheConfig()), ParallelPolicy(1, 4))


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5])
def test_tiny_inputs(n):
    data = np.arange(n, 0, -1, dtype=np.uint64)
    a = data.copy()
    dualheap_sort_parallel(a, None, ParallelPolicy(4, 4))
    assert a.tolist() == sorted(data.tolist())


def test_worker_exception_propagates(monkeypatch):
    from dualheap import parallel

    def boom(*args):
        raise RuntimeError("kernel failed")

    monkeypatch.setattr(parallel, "build_halves_kernel", boom)
    with pytest.raises(RuntimeError, match="kernel failed"):
        dualheap_sort_parallel(np.arange(100, dtype=np.uint64)[::-1].copy(), None,
                               ParallelPolicy(4, 4))
