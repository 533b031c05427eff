"""How the dualheap/heapsort ratio depends on what gets counted.

Runs the line-by-line listing transliteration from tests/ and reports
the ratio under three conventions: guarded comparisons + element moves
(the package default), every comparison the C code evaluates + moves,
and comparisons + every key assignment including temporaries.

    python3 scripts/counting_conventions.py --max-exp 14
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from listing_reference import Listing  # noqa: E402

from dualheap.oracle import Distribution, InputSpec, gen_input  # noqa: E402


def tallies(values, method):
    lst = Listing(values)
    getattr(lst, method)()
    return (lst.guarded_cmp + lst.moves,
            lst.raw_cmp + lst.moves,
            lst.guarded_cmp + lst.assignments)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-exp", type=int, default=8)
    ap.add_argument("--max-exp", type=int, default=14)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    print(f"{'n':>7} {'default':>9} {'raw cmp':>9} {'assign':>9}")
    for k in range(args.min_exp, args.max_exp + 1):
        dual, heap = [0, 0, 0], [0, 0, 0]
        for seed in range(1, args.seeds + 1):
            values = gen_input(InputSpec(Distribution.UNIFORM, 2**k, seed)).tolist()
            for acc, method in ((dual, "dualheap_sort"), (heap, "heapsort")):
                for i, v in enumerate(tallies(values, method)):
                    acc[i] += v
        print(f"{2**k:>7} " + " ".join(f"{d / h:>9.3f}" for d, h in zip(dual, heap)))


if __name__ == "__main__":
    main()
