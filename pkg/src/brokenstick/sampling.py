"""Deterministic sampling of stick partitions and k-gon feasibility predicates.

Random streams are Philox4x64-10 counter-based generators keyed through
numpy's ``SeedSequence`` with ``entropy=seed`` and ``spawn_key=(index,)``.
A (seed, index) pair therefore yields the same stream on every platform,
for every worker count, and for every execution schedule.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

# Exhaustive subset enumeration is exact but combinatorial; refuse inputs
# where C(n, k) would explode.
MAX_PIECES = 25


def stream_for_sample(seed: int, index: int) -> np.random.Generator:
    """Independent uniform generator for one sample ordinal.

    Pure function of (seed, index): distinct indices give statistically
    independent streams, identical indices give bit-identical streams.
    """
    seed = int(seed)
    index = int(index)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if index < 0:
        raise ValueError("sample index must be nonnegative")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Partition:
    """Break points of the unit stick plus the derived piece lengths.

    ``breaks`` is sorted non-decreasing; duplicated break points are kept
    and yield zero-length pieces (they fail every polygon test).
    """

    breaks: tuple[float, ...]
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.breaks) + 1)
        prev = 0.0
        for b in self.breaks:
            if not 0.0 <= b <= 1.0:
                raise ValueError(f"break point {b!r} outside [0, 1]")
            if b < prev:
                raise ValueError("break points must be sorted")
            prev = b

    @property
    def pieces(self) -> tuple[float, ...]:
        """Successive gaps between 0, the break points, and 1."""
        pts = (0.0, *self.breaks, 1.0)
        return tuple(pts[i + 1] - pts[i] for i in range(self.n))


def sample_partition(stream: np.random.Generator, n: int) -> Partition:
    """Break the unit stick into ``n`` pieces at n-1 uniform points."""
    if n < 1:
        raise ValueError("piece count must be >= 1")
    breaks = np.sort(stream.random(n - 1))
    return Partition(tuple(float(b) for b in breaks))


def sample_pieces(stream: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Piece lengths of ``count`` independent partitions, shape (count, n).

    Batch counterpart of :func:`sample_partition`; row i consumes the
    stream's draws [i*(n-1), (i+1)*(n-1)) in order.
    """
    if n < 1:
        raise ValueError("piece count must be >= 1")
    if n == 1:
        return np.ones((count, 1))
    breaks = np.sort(stream.random((count, n - 1)), axis=1)
    return np.diff(breaks, axis=1, prepend=0.0, append=1.0)


def forms_kgon(sides) -> bool:
    """True iff the sides bound a nondegenerate k-gon: max < sum of the rest.

    Degenerate equality (max piece equal to the sum of the others) counts
    as *not* a polygon; the inequality is strict.
    """
    sides = list(sides)
    if len(sides) < 3:
        raise ValueError("a polygon needs at least 3 sides")
    if any(s < 0 for s in sides):
        raise ValueError("side lengths must be nonnegative")
    longest = max(sides)
    return longest < math.fsum(sides) - longest


def count_kgons(pieces, k: int, at_least: int | None = None) -> int:
    """Exact number of k-element subsets of ``pieces`` that form a k-gon.

    Enumerates all C(n, k) subsets; no sampling.  With ``at_least`` the scan
    stops early once that many feasible subsets have been seen, which is the
    cheap way to ask "is there any k-gon at all?".
    """
    pieces = list(pieces)
    n = len(pieces)
    if not 3 <= k <= n:
        raise ValueError(f"subset size k={k} out of range for {n} pieces")
    if n > MAX_PIECES:
        raise ValueError(f"piece count {n} exceeds enumeration limit {MAX_PIECES}")
    count = 0
    for combo in itertools.combinations(pieces, k):
        longest = max(combo)
        if longest < math.fsum(combo) - longest:
            count += 1
            if at_least is not None and count >= at_least:
                return count
    return count


def kth_longest(pieces, k: int) -> float:
    """The k-th largest piece length (k=1 is the longest)."""
    pieces = list(pieces)
    if not 1 <= k <= len(pieces):
        raise ValueError(f"rank k={k} out of range for {len(pieces)} pieces")
    return sorted(pieces, reverse=True)[k - 1]


def has_any_triangle(sorted_pieces: np.ndarray) -> np.ndarray:
    """Rowwise: does any 3-subset of the (ascending-sorted) pieces form a triangle?

    Uses the classical reduction: if any triple works, a consecutive sorted
    triple works, because replacing the two smaller sides of a feasible
    triple by the two largest values below the max only helps.  Equivalence
    with exhaustive enumeration is property-tested.
    """
    a = sorted_pieces
    return (a[..., :-2] + a[..., 1:-1] > a[..., 2:]).any(axis=-1)
