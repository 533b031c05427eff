"""Command-line entry point: ``dualheap {sort,bench,plot,verify,cachesim}``.

Exit codes: 0 success, 1 data/verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import bench, svgplot
from .instrumentation import CacheConfig, CountingContext, cache_simulate, dump_trace, load_trace
from .oracle import InputSpec, gen_input, parse_distribution
from .parallel import ParallelPolicy, dualheap_sort_parallel
from .verify import run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def parse_text(data: bytes) -> np.ndarray:
    values = []
    for lineno, raw in enumerate(data.decode("ascii", errors="replace").splitlines(), 1):
        tok = raw.strip()
        if not tok:
            continue
        if not tok.isdigit() or int(tok) >= 2**64:
            raise InputError(f"line {lineno}: not an unsigned 64-bit integer: {tok!r}")
        values.append(int(tok))
    return np.array(values, dtype=np.uint64)


def parse_binary(data: bytes) -> np.ndarray:
    if len(data) % 8:
        raise InputError(f"offset {len(data) - len(data) % 8}: trailing {len(data) % 8} bytes "
                         "do not form a 64-bit value")
    return np.frombuffer(data, dtype="<u8").astype(np.uint64)


def format_text(arr: np.ndarray) -> bytes:
    return "".join(f"{int(v)}\n" for v in arr).encode("ascii")


def _read_input(path: str | None) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fp:
        return fp.read()


def _write_output(path: str | None, payload: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fp:
            fp.write(payload)


def cmd_sort(args) -> int:
    try:
        raw = _read_input(args.input)
        arr = parse_binary(raw) if args.format == "binary" else parse_text(raw)
    except (InputError, OSError) as exc:
        print(f"dualheap sort: {exc}", file=sys.stderr)
        return EXIT_FAIL
    arr = np.ascontiguousarray(arr)
    if args.parallel is not None:
        dualheap_sort_parallel(arr, None, ParallelPolicy(max_concurrency=args.parallel))
    else:
        bench.get_sorter(args.algo)(arr, None)
    payload = arr.astype("<u8").tobytes() if args.format == "binary" else format_text(arr)
    _write_output(args.output, payload)
    return EXIT_OK


def cmd_bench(args) -> int:
    policy = ParallelPolicy(max_concurrency=args.parallel)
    records = bench.run_grid(args.algos, args.sizes, args.dists, args.reps, args.seed0,
                             policy, timing=not args.no_timing)
    if args.out in (None, "-"):
        bench.write_csv(records, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fp:
            bench.write_csv(records, fp)
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        with open(args.csv, newline="") as fp:
            records = bench.read_csv(fp)
    except (ValueError, OSError) as exc:
        print(f"dualheap plot: {exc}", file=sys.stderr)
        return EXIT_FAIL
    svg = svgplot.render_svg(records, title=args.title)
    _write_output(args.out, svg.encode("utf-8"))
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    results = run_verification(args.exhaustive_max, args.random)
    for r in results:
        print(r.line())
    if results:
        print(f"{sum(r.ok for r in results)}/{len(results)} checks passed "
              f"in {time.perf_counter() - t0:.1f}s")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_cachesim(args) -> int:
    cfg = CacheConfig(args.line, args.sets, args.ways, args.element_bytes)
    if args.trace:
        try:
            with open(args.trace) as fp:
                events = load_trace(fp)
        except (ValueError, OSError) as exc:
            print(f"dualheap cachesim: {exc}", file=sys.stderr)
            return EXIT_FAIL
        stats = cache_simulate(events, cfg)
        print(f"trace={args.trace} events={len(events)}")
    else:
        dist, k = args.dist
        data = gen_input(InputSpec(dist, args.n, args.seed, k))
        ctx = CountingContext(trace=bool(args.dump_trace), cache=cfg)
        bench.get_sorter(args.algo)(data, ctx)
        c = ctx.counters
        stats = ctx.cache_stats
        print(f"algorithm={args.algo} n={args.n} seed={args.seed} distribution={args.dist_label}")
        print(f"comparisons={c.comparisons} moves={c.moves} tree_swaps={c.tree_swaps} "
              f"max_depth={c.max_depth}")
        if args.dump_trace:
            with open(args.dump_trace, "w") as fp:
                dump_trace(ctx.events, fp)
    print(f"cache: line_bytes={cfg.line_bytes} num_sets={cfg.num_sets} ways={cfg.ways} "
          f"element_bytes={cfg.element_bytes} capacity_bytes={cfg.capacity_bytes}")
    print(f"accesses={stats.accesses} misses={stats.misses} miss_rate={stats.miss_rate:.6f}")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def _positive_int(text: str) -> int:
    v = _int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    v = _int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def _int(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _int_list(text: str) -> list[int]:
    vals = [_nonneg_int(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _algo(text: str) -> str:
    if text not in bench.ALGORITHMS:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm {text!r}; choose from {', '.join(bench.ALGORITHMS)}")
    return text


def _algo_list(text: str) -> list[str]:
    return [_algo(t.strip()) for t in text.split(",") if t.strip()]


def _dist(text: str):
    try:
        return parse_distribution(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dist_list(text: str):
    return [_dist(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualheap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sort", help="sort integers from a file or stdin")
    s.add_argument("input", nargs="?", help="input path (default: stdin)")
    s.add_argument("--algo", type=_algo, default="dualheap")
    s.add_argument("--format", choices=("text", "binary"), default="text")
    s.add_argument("--parallel", type=_positive_int, metavar="N",
                   help="fork-join dualheap sort with N concurrent tasks")
    s.add_argument("-o", "--output", help="output path (default: stdout)")
    s.set_defaults(func=cmd_sort)

    b = sub.add_parser("bench", help="run the operation-count experiment grid")
    b.add_argument("--algos", type=_algo_list, default=["heapsort", "heapsort_modified", "dualheap"])
    b.add_argument("--sizes", type=_int_list, default=[2**k for k in range(8, 16)])
    b.add_argument("--dists", type=_dist_list, default=[parse_distribution("uniform")])
    b.add_argument("--reps", type=_positive_int, default=30)
    b.add_argument("--seed0", type=_nonneg_int, default=1)
    b.add_argument("--parallel", type=_positive_int, default=4,
                   help="max concurrency for dualheap_parallel")
    b.add_argument("--no-timing", action="store_true", help="skip the wall-clock pass")
    b.add_argument("--out", help="CSV path (default: stdout)")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="render a bench CSV as an SVG scatter plot")
    pl.add_argument("csv")
    pl.add_argument("--out", help="SVG path (default: stdout)")
    pl.add_argument("--title", default="Operations per sort")
    pl.set_defaults(func=cmd_plot)

    v = sub.add_parser("verify", help="run the oracle suites")
    v.add_argument("--exhaustive-max", type=_nonneg_int, default=8, metavar="M")
    v.add_argument("--random", type=_nonneg_int, default=1000, metavar="R")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cachesim", help="run one sort through the cache model")
    c.add_argument("--algo", type=_algo, default="dualheap")
    c.add_argument("--n", type=_nonneg_int, default=2**16)
    c.add_argument("--seed", type=_nonneg_int, default=1)
    c.add_argument("--dist", type=_dist, default=parse_distribution("uniform"))
    c.add_argument("--line", type=_positive_int, default=64)
    c.add_argument("--sets", type=_positive_int, default=64)
    c.add_argument("--ways", type=_positive_int, default=8)
    c.add_argument("--element-bytes", type=_positive_int, default=8)
    c.add_argument("--dump-trace", metavar="PATH", help="also write the access trace")
    c.add_argument("--trace", metavar="PATH", help="simulate a dumped trace instead of sorting")
    c.set_defaults(func=cmd_cachesim)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sort" and args.parallel is not None and args.algo != "dualheap":
        parser.error("--parallel applies to --algo dualheap only")
    if args.command == "cachesim":
        if args.algo == "dualheap_parallel":
            parser.error("cachesim traces single-threaded runs; use --algo dualheap")
        try:
            CacheConfig(args.line, args.sets, args.ways, args.element_bytes)
        except ValueError as exc:
            parser.error(str(exc))
        dist, k = args.dist
        args.dist_label = InputSpec(dist, 0, 0, k).label
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
