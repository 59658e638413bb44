"""Stick-breaking measures: exact evaluators paired with Monte Carlo oracles.

Covers the conditional expected triangle area, the split-the-largest
iterated process, the area-exceedance law, the expected cyclic
quadrilateral area, and the k-th-longest order statistics of uniform
spacings.  Every closed form here has a sampling counterpart so the two
routes can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._chunked import run_chunked
from .numerics import Estimate, StreamingStats, find_root, integrate, merge_all
from .polygons import heron_area
from .sampling import sample_pieces

# Largest possible triangle area with perimeter 1 (equilateral).
MAX_TRIANGLE_AREA = math.sqrt(3.0) / 36.0


@dataclass(frozen=True)
class ConditionalEstimate:
    """Rejection-sampled conditional mean plus its acceptance-rate estimate."""

    value: Estimate
    acceptance: Estimate


@dataclass(frozen=True)
class ProcessOutcome:
    """Terminal state of one split-the-largest run."""

    perimeter: float
    area: float
    rounds: int


class RoundCapExceeded(RuntimeError):
    """The iterated splitting process hit its safety cap without a triangle."""


def exact_expected_triangle_area() -> float:
    """Expected triangle area given that the three pieces form one: pi/105."""
    return math.pi / 105.0


def exact_expected_quad_area() -> float:
    """Expected maximal quadrilateral area given feasibility:
    17*pi/525 - pi^2/160."""
    return 17.0 * math.pi / 525.0 - math.pi**2 / 160.0


def _heron_rows(p: np.ndarray) -> np.ndarray:
    s = 0.5
    rad = s * (s - p[:, 0]) * (s - p[:, 1]) * (s - p[:, 2])
    return np.sqrt(np.maximum(rad, 0.0))


def mc_expected_triangle_area(seed: int, samples: int, workers: int = 1) -> ConditionalEstimate:
    """Mean triangle area over 3-piece partitions, conditioned by rejection.

    ``samples`` counts raw partitions drawn; the acceptance estimate is the
    fraction that form a triangle (all pieces < 1/2).
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        p = sample_pieces(stream, count, 3)
        ok = p.max(axis=1) < 0.5
        areas = _heron_rows(p[ok])
        return StreamingStats.from_values(areas), StreamingStats.from_values(ok)

    parts = run_chunked(worker, samples, seed, workers)
    value = merge_all(r[0] for r in parts)
    acc = merge_all(r[1] for r in parts)
    return ConditionalEstimate(value=value.finalize(seed), acceptance=acc.finalize(seed))


def mc_expected_quad_area(seed: int, samples: int, workers: int = 1) -> ConditionalEstimate:
    """Mean maximal (cyclic) quadrilateral area over feasible 4-piece
    partitions; feasibility for unit perimeter is max piece < 1/2."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        p = sample_pieces(stream, count, 4)
        ok = p.max(axis=1) < 0.5
        q = p[ok]
        s = 0.5
        rad = (s - q[:, 0]) * (s - q[:, 1]) * (s - q[:, 2]) * (s - q[:, 3])
        areas = np.sqrt(np.maximum(rad, 0.0))
        return StreamingStats.from_values(areas), StreamingStats.from_values(ok)

    parts = run_chunked(worker, samples, seed, workers)
    value = merge_all(r[0] for r in parts)
    acc = merge_all(r[1] for r in parts)
    return ConditionalEstimate(value=value.finalize(seed), acceptance=acc.finalize(seed))


def simulate_split_largest(stream: np.random.Generator, cap: int = 10_000) -> ProcessOutcome:
    """Split a stick into 3; if no triangle, re-split its largest piece.

    Each round breaks the current segment at two uniform points (scaled to
    its length) and stops at the first feasible triple.  Ties for the
    largest piece (probability 0) resolve to the first in index order.
    """
    length = 1.0
    for rounds in range(1, cap + 1):
        u = stream.random(2)
        lo, hi = (u[0], u[1]) if u[0] <= u[1] else (u[1], u[0])
        pieces = (lo * length, (hi - lo) * length, (1.0 - hi) * length)
        if max(pieces) < length / 2.0:
            return ProcessOutcome(
                perimeter=length,
                area=heron_area(*pieces),
                rounds=rounds,
            )
        length = max(pieces)
    raise RoundCapExceeded(f"no triangle after {cap} rounds")


@dataclass(frozen=True)
class SplitLargestEstimate:
    perimeter: Estimate
    area: Estimate
    p_first_round: Estimate
    capped: int


def mc_split_largest(
    seed: int, samples: int, workers: int = 1, cap: int = 10_000
) -> SplitLargestEstimate:
    """Monte Carlo expectations of the split-the-largest process."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        length = np.ones(count)
        perim = np.empty(count)
        area = np.empty(count)
        first = np.zeros(count)
        active = np.arange(count)
        capped = 0
        for rounds in range(1, cap + 1):
            if active.size == 0:
                break
            u = stream.random((active.size, 2))
            lo = np.minimum(u[:, 0], u[:, 1]) * length[active]
            hi = np.maximum(u[:, 0], u[:, 1]) * length[active]
            cur = length[active]
            a, b, c = lo, hi - lo, cur - hi
            biggest = np.maximum(a, np.maximum(b, c))
            done = biggest < cur / 2.0
            idx = active[done]
            perim[idx] = cur[done]
            s = cur[done] / 2.0
            rad = s * (s - a[done]) * (s - b[done]) * (s - c[done])
            area[idx] = np.sqrt(np.maximum(rad, 0.0))
            if rounds == 1:
                first[idx] = 1.0
            length[active] = biggest
            active = active[~done]
        else:
            capped = active.size
        keep = np.ones(count, dtype=bool)
        keep[active] = False
        return (
            StreamingStats.from_values(perim[keep]),
            StreamingStats.from_values(area[keep]),
            StreamingStats.from_values(first),
            capped,
        )

    parts = run_chunked(worker, samples, seed, workers)
    return SplitLargestEstimate(
        perimeter=merge_all(r[0] for r in parts).finalize(seed),
        area=merge_all(r[1] for r in parts).finalize(seed),
        p_first_round=merge_all(r[2] for r in parts).finalize(seed),
        capped=sum(r[3] for r in parts),
    )


@dataclass(frozen=True)
class ExceedanceQuery:
    """Area threshold with the solved bracket of the exceedance integrand."""

    a0: float
    mu1: float
    mu2: float


def exceedance_roots(a0: float, tol: float = 1e-14) -> ExceedanceQuery:
    """Roots 0 < mu1 < mu2 < 1 of k*(1 - k^2) = 8*a0.

    The cubic k - k^3 rises to its max at k* = 1/sqrt(3) and falls back to
    0 at 1, so each half-interval brackets exactly one root.
    """
    if not 0.0 < a0 < MAX_TRIANGLE_AREA:
        raise ValueError(f"threshold {a0} outside (0, {MAX_TRIANGLE_AREA})")
    kstar = 1.0 / math.sqrt(3.0)

    def f(k):
        return k * (1.0 - k * k) - 8.0 * a0

    mu1 = find_root(f, 0.0, kstar, tol=tol)
    mu2 = find_root(f, kstar, 1.0, tol=tol)
    return ExceedanceQuery(a0=a0, mu1=mu1, mu2=mu2)


def _geometric_panels(inner: float, outer: float, levels: int = 48):
    """Panel edges from ``inner`` toward ``outer``, halving toward ``outer``.

    The exceedance integrand vanishes like a square root at the bracket
    endpoints; geometric subdivision keeps Simpson's error estimate honest
    on every panel.
    """
    edges = [inner]
    span = outer - inner
    for j in range(1, levels + 1):
        edges.append(outer - span * 0.5**j)
    edges.append(outer)
    return edges


def area_exceedance(a0: float, tol: float = 1e-9) -> float:
    """P(area > a0 | the pieces form a triangle), by quadrature.

    Evaluates 4 * integral over [mu1, mu2] of
    sqrt(k^2 (1 - k^2)^2 - (8 a0)^2) dk, splitting at the integrand's
    interior maximum and subdividing geometrically toward both endpoints.
    """
    q = exceedance_roots(a0)
    c2 = (8.0 * a0) ** 2

    def g(k):
        rad = (k * (1.0 - k * k)) ** 2 - c2
        return math.sqrt(max(rad, 0.0))

    kstar = 1.0 / math.sqrt(3.0)
    edges = list(reversed(_geometric_panels(kstar, q.mu1))) + _geometric_panels(kstar, q.mu2)[1:]
    panel_tol = tol / (4.0 * max(1, len(edges) - 1))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += integrate(g, lo, hi, tol=panel_tol)
    return min(1.0, max(0.0, 4.0 * total))


@dataclass(frozen=True)
class ExceedanceMC:
    """Conditional exceedance frequencies for several thresholds at once."""

    acceptance: Estimate
    frequencies: tuple[tuple[float, Estimate], ...]


def mc_area_exceedance(
    a0_values, seed: int, samples: int, workers: int = 1
) -> ExceedanceMC:
    """Conditional frequencies of {area > a0} over triangle-forming partitions.

    One shared set of conditional samples serves every threshold, so the
    estimates are comparable across the grid.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    a0s = [float(a) for a in a0_values]

    def worker(stream, count):
        p = sample_pieces(stream, count, 3)
        ok = p.max(axis=1) < 0.5
        areas = _heron_rows(p[ok])
        per_a0 = [StreamingStats.from_values(areas > a0) for a0 in a0s]
        return StreamingStats.from_values(ok), per_a0

    parts = run_chunked(worker, samples, seed, workers)
    acc = merge_all(r[0] for r in parts)
    freqs = []
    for i, a0 in enumerate(a0s):
        stat = merge_all(r[1][i] for r in parts)
        freqs.append((a0, stat.finalize(seed)))
    return ExceedanceMC(acceptance=acc.finalize(seed), frequencies=tuple(freqs))


def expected_kth_longest(n: int, k: int) -> float:
    """Expected length of the k-th longest of n uniform spacings:
    (1/n) * (1/k + 1/(k+1) + ... + 1/n)."""
    if not 1 <= k <= n:
        raise ValueError(f"rank k={k} out of range for n={n}")
    return math.fsum(1.0 / i for i in range(k, n + 1)) / n


def variance_kth_longest(n: int, k: int) -> float:
    """Variance of the k-th longest of n uniform spacings."""
    if not 1 <= k <= n:
        raise ValueError(f"rank k={k} out of range for n={n}")
    inv_sq = math.fsum(1.0 / (i * i) for i in range(k, n + 1))
    harm = math.fsum(1.0 / i for i in range(k, n + 1))
    var = inv_sq / (n * (n + 1)) - harm * harm / (n * n * (n + 1))
    return max(0.0, var)


@dataclass(frozen=True)
class OrderStatEstimate:
    """Empirical mean and variance of one spacing rank."""

    mean: Estimate
    variance: float
    variance_std_error: float


def mc_kth_longest(
    n: int, k: int, seed: int, samples: int, workers: int = 1
) -> OrderStatEstimate:
    """Empirical mean/variance of the k-th longest piece over partitions."""
    return mc_kth_longest_all(n, seed, samples, workers)[k - 1]


def mc_kth_longest_all(
    n: int, seed: int, samples: int, workers: int = 1
) -> list[OrderStatEstimate]:
    """All n rank statistics from one shared set of sampled partitions."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if n < 1:
        raise ValueError("piece count must be >= 1")

    def worker(stream, count):
        p = sample_pieces(stream, count, n)
        p.sort(axis=1)
        # column j of the ascending sort is the (n-j)-th longest
        return [StreamingStats.from_values(p[:, n - k]) for k in range(1, n + 1)]

    parts = run_chunked(worker, samples, seed, workers)
    out = []
    for j in range(n):
        stat = merge_all(r[j] for r in parts)
        out.append(
            OrderStatEstimate(
                mean=stat.finalize(seed),
                variance=stat.variance,
                variance_std_error=stat.variance_std_error,
            )
        )
    return out
