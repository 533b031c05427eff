"""Operation counts for the three sequential sorters on uniform input.

Writes a CSV of every run and an SVG scatter of comparisons + moves
against n, then prints the mean dualheap/heapsort ratio per size.

    python3 scripts/operation_counts.py --reps 5 --out results/ops
"""

import argparse
from collections import defaultdict
from pathlib import Path

from dualheap.bench import run_grid, write_csv
from dualheap.oracle import Distribution
from dualheap.svgplot import render_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-exp", type=int, default=10)
    ap.add_argument("--max-exp", type=int, default=18)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--out", type=Path, default=Path("results/ops"))
    args = ap.parse_args()

    sizes = [2**k for k in range(args.min_exp, args.max_exp + 1)]
    records = run_grid(["heapsort", "heapsort_modified", "dualheap"], sizes,
                       [(Distribution.UNIFORM, 1)], args.reps, timing=False)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out.with_suffix(".csv"), "w", newline="") as fp:
        write_csv(records, fp)
    args.out.with_suffix(".svg").write_text(render_svg(records, "Uniform input"))

    ops = defaultdict(list)
    for r in records:
        ops[r.algorithm, r.n].append(r.operations)
    print(f"{'n':>8} {'heapsort':>12} {'modified':>12} {'dualheap':>12} {'ratio':>7}")
    for n in sizes:
        h, m, d = (sum(ops[a, n]) / len(ops[a, n])
                   for a in ("heapsort", "heapsort_modified", "dualheap"))
        print(f"{n:>8} {h:>12.0f} {m:>12.0f} {d:>12.0f} {d / h:>7.3f}")


if __name__ == "__main__":
    main()
