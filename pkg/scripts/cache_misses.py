"""Simulated cache misses, heapsort against dualheap sort, across sizes.

    python3 scripts/cache_misses.py --max-exp 20 --seeds 3
"""

import argparse

from dualheap.instrumentation import CacheConfig, CountingContext
from dualheap.oracle import Distribution, InputSpec, gen_input
from dualheap.sorters import dualheap_sort, heapsort


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-exp", type=int, default=12)
    ap.add_argument("--max-exp", type=int, default=20)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--line", type=int, default=64)
    ap.add_argument("--sets", type=int, default=64)
    ap.add_argument("--ways", type=int, default=8)
    args = ap.parse_args()
    cfg = CacheConfig(line_bytes=args.line, num_sets=args.sets, ways=args.ways)

    print(f"cache: {cfg.capacity_bytes} bytes, {cfg.ways}-way, {cfg.line_bytes}B lines")
    print(f"{'n':>8} {'heapsort':>12} {'dualheap':>12} {'ratio':>7}")
    for k in range(args.min_exp, args.max_exp + 1):
        totals = {"heapsort": 0, "dualheap": 0}
        for seed in range(1, args.seeds + 1):
            data = gen_input(InputSpec(Distribution.UNIFORM, 2**k, seed))
            for name, sort in (("heapsort", heapsort), ("dualheap", dualheap_sort)):
                ctx = CountingContext(cache=cfg)
                sort(data.copy(), ctx)
                totals[name] += ctx.cache_stats.misses
        h, d = totals["heapsort"] / args.seeds, totals["dualheap"] / args.seeds
        print(f"{2**k:>8} {h:>12.0f} {d:>12.0f} {d / h:>7.3f}")


if __name__ == "__main__":
    main()
