"""Chunked, order-stable execution of vectorized Monte Carlo workers.

Estimators consume samples in fixed-size chunks; chunk ``c`` derives its
random stream from ``stream_for_sample(seed, c)``.  Worker threads only
parallelize chunk evaluation, and results are folded in chunk order, so the
output is a pure function of (seed, parameters) for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .sampling import stream_for_sample

CHUNK_SIZE = 1 << 15


def chunk_lengths(total: int, chunk_size: int = CHUNK_SIZE):
    """Sizes of the consecutive chunks covering ``total`` samples."""
    if total < 1:
        raise ValueError("sample count must be >= 1")
    full, rem = divmod(total, chunk_size)
    sizes = [chunk_size] * full
    if rem:
        sizes.append(rem)
    return sizes


def run_chunked(worker, total: int, seed: int, workers: int = 1, chunk_size: int = CHUNK_SIZE):
    """Evaluate ``worker(stream, length)`` for every chunk, in chunk order.

    Returns the list of per-chunk results ordered by chunk index.  The
    worker must not mutate shared state; all cross-chunk combination is the
    caller's responsibility (typically StreamingStats merges).
    """
    sizes = chunk_lengths(total, chunk_size)

    def job(c: int):
        return worker(stream_for_sample(seed, c), sizes[c])

    if workers <= 1 or len(sizes) == 1:
        return [job(c) for c in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(len(sizes))))
