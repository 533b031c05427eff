"""Instrumented heapsort, two-exchange heapsort and dualheap sort."""

from .heapcore import Direction, HeapView, Kind, build_heap, heap_check, sift_down
from .instrumentation import (
    CacheConfig,
    CacheStats,
    CountingContext,
    EventKind,
    OpCounters,
    TraceEvent,
    cache_simulate,
    counters_merge,
    trace_record,
)
from .oracle import Distribution, InputSpec, gen_input, verify_sorted_permutation
from .parallel import ParallelPolicy, dualheap_sort_parallel
from .sorters import (
    PartitionRegion,
    SortOutcome,
    dualheap_partition,
    dualheap_sort,
    exchange_phase,
    heapsort,
    heapsort_modified,
    partition_heap,
    tree_swap,
)

__all__ = [
    "CacheConfig", "CacheStats", "CountingContext", "Direction", "Distribution", "EventKind",
    "HeapView", "InputSpec", "Kind", "OpCounters", "ParallelPolicy", "PartitionRegion",
    "SortOutcome", "TraceEvent", "build_heap", "cache_simulate", "counters_merge",
    "dualheap_partition", "dualheap_sort", "dualheap_sort_parallel", "exchange_phase",
    "gen_input", "heap_check", "heapsort", "heapsort_modified", "partition_heap", "sift_down",
    "trace_record", "tree_swap", "verify_sorted_permutation",
]
