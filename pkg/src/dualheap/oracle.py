"""Input generators and ground-truth verifiers.

Everything here is deliberately naive (sorted copies, Counters) so it can
judge the heap code without sharing any of its machinery.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Distribution(enum.Enum):
    UNIFORM = "uniform"
    SORTED = "sorted"
    REVERSED = "reversed"
    CONSTANT = "constant"
    FEW_DISTINCT = "few_distinct"


@dataclass(frozen=True)
class InputSpec:
    distribution: Distribution
    n: int
    seed: int = 1
    k: int = 1  # only read by FEW_DISTINCT

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")

    @property
    def label(self) -> str:
        if self.distribution is Distribution.FEW_DISTINCT:
            return f"few_distinct:{self.k}"
        return self.distribution.value


_DIST_RE = re.compile(r"^(uniform|sorted|reversed|constant|few_distinct)(?::(\d+))?$")


def parse_distribution(text: str) -> tuple[Distribution, int]:
    """Parse ``uniform``, ``sorted``, ..., ``few_distinct:K`` into (dist, k)."""
    m = _DIST_RE.match(text.strip().lower())
    if m is None:
        raise ValueError(f"unknown distribution {text!r}")
    dist = Distribution(m.group(1))
    if dist is Distribution.FEW_DISTINCT:
        if m.group(2) is None:
            raise ValueError("few_distinct needs a value count, e.g. few_distinct:16")
        k = int(m.group(2))
        if k < 1:
            raise ValueError("few_distinct value count must be >= 1")
        return dist, k
    if m.group(2) is not None:
        raise ValueError(f"{dist.value} takes no parameter")
    return dist, 1


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First ``n`` outputs of the splitmix64 sequence started at ``seed``.

    Vectorised: the i-th state is ``seed + (i+1)*gamma`` modulo 2**64, and
    numpy's uint64 arithmetic wraps exactly like the scalar recurrence.
    """
    with np.errstate(over="ignore"):
        i = np.arange(1, n + 1, dtype=np.uint64)
        z = np.uint64(seed) + i * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def gen_input(spec: InputSpec) -> np.ndarray:
    """Deterministic uint64 array for ``spec``."""
    n = spec.n
    d = spec.distribution
    if d is Distribution.UNIFORM:
        return splitmix64(spec.seed, n)
    if d is Distribution.FEW_DISTINCT:
        return splitmix64(spec.seed, n) % np.uint64(spec.k)
    if d is Distribution.SORTED:
        return np.arange(n, dtype=np.uint64)
    if d is Distribution.REVERSED:
        return np.arange(n - 1, -1, -1, dtype=np.uint64)
    if d is Distribution.CONSTANT:
        return np.full(n, spec.seed, dtype=np.uint64)
    raise AssertionError(d)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


def verify_sorted_permutation(before, after) -> Verdict:
    """PASS iff ``after`` is ascending and has the same multiset as ``before``."""
    before = np.asarray(before)
    after = np.asarray(after)
    if before.shape != after.shape or not np.array_equal(np.sort(before), np.sort(after)):
        return Verdict(False, "multiset changed")
    bad = np.flatnonzero(after[1:] < after[:-1])
    if bad.size:
        return Verdict(False, f"out of order at position {int(bad[0]) + 2}")
    return PASS


def partition_oracle(before, after, n_small: int) -> Verdict:
    """PASS iff ``after`` permutes ``before`` and its first ``n_small``
    positions hold the ``n_small`` smallest values (as a multiset)."""
    before = [int(x) for x in before]
    after = [int(x) for x in after]
    if len(before) != len(after):
        raise ValueError("length mismatch")
    if not 0 <= n_small <= len(before):
        raise ValueError(f"split {n_small} outside 0..{len(before)}")
    if Counter(before) != Counter(after):
        return Verdict(False, "multiset changed")
    if Counter(after[:n_small]) != Counter(sorted(before)[:n_small]):
        return Verdict(False, f"first {n_small} positions are not the smallest values")
    return PASS


def reference_order_statistics(arr, positions) -> list[int]:
    """Values of ``sorted(arr)`` at the given 1-based positions."""
    ranked = sorted(int(x) for x in arr)
    out = []
    for p in positions:
        if not 1 <= p <= len(ranked):
            raise ValueError(f"position {p} outside 1..{len(ranked)}")
        out.append(ranked[p - 1])
    return out
