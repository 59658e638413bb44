"""Subset polygon counts: closed forms, Monte Carlo, witnesses, and the
repeated-breaking process.

``P(k, n, m)`` is the probability that at least m of the C(n, k) piece
subsets of a random n-piece partition form k-gons.  Three families have
known closed forms; everything else is estimated.  ``find_witness``
constructs, for any target m, a piece list whose exact subset count equals
m, certifying that every count is achievable.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._chunked import run_chunked
from .numerics import Estimate, StreamingStats, merge_all
from .sampling import count_kgons, has_any_triangle, sample_pieces

MAX_WITNESS_PIECES = 12
MAX_MC_PIECES = 25


def fibonacci(i: int) -> int:
    """F_1 = F_2 = 1 convention."""
    if i < 1:
        raise ValueError("Fibonacci index must be >= 1")
    a, b = 1, 1
    for _ in range(i - 1):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class KgonQuery:
    """Parameters of one subset-counting experiment."""

    k: int
    n: int
    m: int

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("polygon size k must be >= 3")
        if self.n < self.k:
            raise ValueError("piece count n must be >= k")
        if not 0 <= self.m <= math.comb(self.n, self.k):
            raise ValueError(f"required count m={self.m} outside [0, C(n,k)]")


def closed_form_P(query: KgonQuery) -> float | None:
    """Closed form of P(k, n, m) when one is known, else None.

    Known families:
      * m = 0 (trivially 1),
      * P(n, n, 1) = 1 - n / 2^(n-1),
      * P(3, n, 1) = 1 - prod_{j=2..n} j / (F_{j+2} - 1),
      * P(3, n, C(n,3)) = 1 / C(2n-2, n).
    """
    k, n, m = query.k, query.n, query.m
    if m == 0:
        return 1.0
    if k == n and m == 1:
        return 1.0 - n / 2.0 ** (n - 1)
    if k == 3 and m == 1:
        prod = 1.0
        for j in range(2, n + 1):
            prod *= j / (fibonacci(j + 2) - 1)
        return 1.0 - prod
    if k == 3 and m == math.comb(n, 3):
        return 1.0 / math.comb(2 * n - 2, n)
    return None


def _subset_indices(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)


def count_kgons_rows(pieces: np.ndarray, k: int) -> np.ndarray:
    """Exact per-row subset counts for a (rows, n) array of piece lengths."""
    rows, n = pieces.shape
    idx = _subset_indices(n, k)
    counts = np.zeros(rows, dtype=np.int64)
    # block over subsets to bound the gathered (rows, block, k) temporary
    block = max(1, int(4_000_000 / max(1, rows * k)))
    for start in range(0, idx.shape[0], block):
        sub = pieces[:, idx[start : start + block]]
        sums = sub.sum(axis=2)
        maxs = sub.max(axis=2)
        counts += (maxs < sums - maxs).sum(axis=1)
    return counts


def mc_P(query: KgonQuery, seed: int, samples: int, workers: int = 1) -> Estimate:
    """Monte Carlo estimate of P(k, n, m) with Bernoulli standard error."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    k, n, m = query.k, query.n, query.m
    if n > MAX_MC_PIECES:
        raise ValueError(f"piece count {n} exceeds enumeration limit {MAX_MC_PIECES}")
    if m == 0:
        # every partition satisfies count >= 0
        return Estimate(1.0, 0.0, 1.0, 1.0, samples, seed)
    total_subsets = math.comb(n, k)

    def worker(stream, count):
        p = sample_pieces(stream, count, n)
        if k == n:
            hit = p.max(axis=1) < 0.5
        elif k == 3 and m == 1:
            hit = has_any_triangle(np.sort(p, axis=1))
        elif k == 3 and m == total_subsets:
            q = np.sort(p, axis=1)
            # the binding triple is (two smallest, largest)
            hit = q[:, 0] + q[:, 1] > q[:, -1]
        else:
            hit = count_kgons_rows(p, k) >= m
        return StreamingStats.from_values(hit)

    return merge_all(run_chunked(worker, samples, seed, workers)).finalize(seed)


@dataclass(frozen=True)
class CountDistribution:
    """Empirical distribution of the exact subset count."""

    k: int
    n: int
    cells: tuple[float, ...]  # index m -> P(count == m), m = 0..C(n,k)
    n_samples: int
    seed: int

    def at_least(self, m: int) -> float:
        return float(sum(self.cells[m:]))


def exact_count_distribution(
    k: int, n: int, seed: int, samples: int, workers: int = 1
) -> CountDistribution:
    """Histogram of count_kgons over sampled partitions; cells sum to 1."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if n > MAX_WITNESS_PIECES:
        raise ValueError(f"piece count {n} exceeds histogram limit {MAX_WITNESS_PIECES}")
    KgonQuery(k, n, 0)
    ncells = math.comb(n, k) + 1

    def worker(stream, count):
        p = sample_pieces(stream, count, n)
        return np.bincount(count_kgons_rows(p, k), minlength=ncells)

    hist = sum(run_chunked(worker, samples, seed, workers))
    return CountDistribution(
        k=k, n=n, cells=tuple(hist / samples), n_samples=samples, seed=seed
    )


class WitnessError(RuntimeError):
    """Constructive witness search failed to verify the requested count."""


def find_witness(k: int, n: int, m: int) -> tuple[float, ...]:
    """Normalized piece list whose exact k-gon subset count equals m.

    For m below C(n-1, k), one oversized piece dominates the rest (no
    subset containing it is feasible) and the remaining pieces recurse.
    Otherwise n-1 near-equal pieces (dyadically perturbed so every
    (k-1)-subset sum is distinct) are completed by an n-th piece placed
    between the appropriate consecutive subset-sum thresholds.  The result
    is re-verified with count_kgons before it is returned.
    """
    if not 3 <= k <= n <= MAX_WITNESS_PIECES:
        raise ValueError(f"witness construction needs 3 <= k <= n <= {MAX_WITNESS_PIECES}")
    if not 0 <= m <= math.comb(n, k):
        raise ValueError(f"target count m={m} outside [0, C(n,k)]")
    raw = _witness_raw(k, n, m)
    total = math.fsum(raw)
    pieces = tuple(x / total for x in raw)
    got = count_kgons(pieces, k)
    if got != m:
        raise WitnessError(f"witness for (k={k}, n={n}, m={m}) verified to {got}")
    return pieces


def _witness_raw(k: int, n: int, m: int) -> list[float]:
    if n == k:
        if m == 1:
            return [1.0] * k
        # dominated chain: every piece at least the sum of all smaller ones
        return [float(2 ** (k - i)) for i in range(k)]
    if m < math.comb(n - 1, k):
        rest = _witness_raw(k, n - 1, m)
        return rest + [math.fsum(rest) + 1.0]

    surplus = m - math.comb(n - 1, k)  # feasible subsets that must contain the new piece
    for attempt in range(64):
        eps = 2.0 ** (-(n + 2 + attempt))
        base = [1.0 + eps * (2.0**i) for i in range(n - 1)]
        sums = sorted(
            math.fsum(combo) for combo in itertools.combinations(base, k - 1)
        )
        t = len(sums)  # C(n-1, k-1) thresholds
        cut = t - surplus  # subsets with sum <= new piece stay infeasible
        if cut == 0:
            new = 0.5 * (max(base) + sums[0])
        elif cut == t:
            new = sums[-1] + 1.0
        else:
            new = 0.5 * (sums[cut - 1] + sums[cut])
        pieces = base + [new]
        if count_kgons(pieces, k) == m:
            return pieces
    raise WitnessError(f"threshold construction failed for (k={k}, n={n}, m={m})")


@dataclass(frozen=True)
class XOutcome:
    """Stopping state of the repeated-breaking process."""

    breaks: int
    censored: bool


def simulate_X(stream: np.random.Generator, cap: int = 60) -> XOutcome:
    """Add uniform break points to one stick until some 3 pieces form a
    triangle; X is the break count at the first success.

    Break points accumulate on the original stick.  The triangle test scans
    all 3-subsets exactly (count_kgons with early exit); past the
    enumeration limit it switches to the equivalent consecutive-sorted-triple
    test, though reaching that many pieces without a triangle has
    probability far below float resolution.  Runs are censored at ``cap``
    breaks.
    """
    if cap < 3:
        raise ValueError("cap must be >= 3")
    breaks: list[float] = []
    for b in range(1, cap + 1):
        bisect.insort(breaks, float(stream.random()))
        if b < 2:
            continue
        pts = [0.0] + breaks + [1.0]
        pieces = [pts[i + 1] - pts[i] for i in range(len(pts) - 1)]
        if len(pieces) <= MAX_MC_PIECES:
            found = count_kgons(pieces, 3, at_least=1) >= 1
        else:
            found = bool(has_any_triangle(np.sort(pieces)))
        if found:
            return XOutcome(breaks=b, censored=False)
    return XOutcome(breaks=cap, censored=True)


@dataclass(frozen=True)
class XProcessEstimate:
    p_two: Estimate
    p_three: Estimate
    mean: Estimate
    censored: int
    cap: int


def mc_X(seed: int, samples: int, workers: int = 1, cap: int = 60) -> XProcessEstimate:
    """Distribution of the stopping break count X.

    Censored runs (no triangle within ``cap`` breaks) are counted at the cap
    for the mean; with the default cap their expected mass is far below
    1e-6, and the observed number is reported alongside.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if cap < 3:
        raise ValueError("cap must be >= 3")

    def worker(stream, count):
        u = stream.random((count, cap))
        x = np.full(count, cap, dtype=np.int64)
        active = np.arange(count)
        for b in range(2, cap + 1):
            if active.size == 0:
                break
            pts = np.sort(u[active, :b], axis=1)
            pieces = np.diff(pts, axis=1, prepend=0.0, append=1.0)
            pieces.sort(axis=1)
            done = has_any_triangle(pieces)
            x[active[done]] = b
            active = active[~done]
        censored = int(active.size)
        return (
            StreamingStats.from_values(x == 2),
            StreamingStats.from_values(x == 3),
            StreamingStats.from_values(x.astype(float)),
            censored,
        )

    parts = run_chunked(worker, samples, seed, workers)
    return XProcessEstimate(
        p_two=merge_all(r[0] for r in parts).finalize(seed),
        p_three=merge_all(r[1] for r in parts).finalize(seed),
        mean=merge_all(r[2] for r in parts).finalize(seed),
        censored=sum(r[3] for r in parts),
        cap=cap,
    )


def mc_event_E(seed: int, samples: int, workers: int = 1) -> Estimate:
    """Frequency of: triangle after 2 breaks, but no triangle among the 4
    pieces after a 3rd break lands on the same stick."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        u = stream.random((count, 3))
        two = np.sort(u[:, :2], axis=1)
        p2 = np.diff(two, axis=1, prepend=0.0, append=1.0)
        tri2 = p2.max(axis=1) < 0.5
        three = np.sort(u, axis=1)
        p3 = np.diff(three, axis=1, prepend=0.0, append=1.0)
        p3.sort(axis=1)
        tri3 = has_any_triangle(p3)
        return StreamingStats.from_values(tri2 & ~tri3)

    return merge_all(run_chunked(worker, samples, seed, workers)).finalize(seed)


def ex_bounds(term_tol: float = 1e-12) -> tuple[float, float]:
    """Proved bracket for E[X].

    Lower bound 353/112 comes from the exact masses at X = 2, 3.  The upper
    bound is 1 + S - 3/112 where S sums prod_{j=2..n} j/(F_{j+2} - 1) over
    n >= 2, truncated once terms drop below ``term_tol``.
    """
    lower = 353.0 / 112.0
    s = 0.0
    term = 1.0
    j = 2
    while True:
        term_factor = j / (fibonacci(j + 2) - 1)
        term = term * term_factor if j > 2 else term_factor
        s += term
        if term < term_tol:
            break
        j += 1
    upper = 1.0 + s - 3.0 / 112.0
    return lower, upper
