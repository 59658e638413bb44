"""Root finding, adaptive quadrature, and streaming statistics.

These are the numerical workhorses behind every estimator: bracketed
bisection (derivative-free, globally convergent), adaptive Simpson
quadrature with an explicit error budget, and a mergeable single-pass
moment accumulator for parallel Monte Carlo reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# 95% confidence level is the single convention used in every report.
Z95 = 1.96


def find_root(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Bisection root of ``f`` on [lo, hi].

    Requires a sign change (f(lo) * f(hi) <= 0).  Stops when the bracket is
    narrower than ``tol`` or an evaluation hits |f| <= tol.  The result does
    not depend on which endpoint carries which sign.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if lo > hi:
        lo, hi = hi, lo
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) <= tol or (hi - lo) <= tol:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def integrate(f, a: float, b: float, tol: float = 1e-9, max_depth: int = 60) -> float:
    """Adaptive Simpson estimate of the integral of ``f`` over [a, b].

    The estimated absolute error is kept below ``tol`` by halving panels;
    exceeding ``max_depth`` nested halvings raises.  Integrable square-root
    endpoint behaviour should be handled by the caller via pre-subdivision
    (see the exceedance evaluator), which keeps the local error estimates
    honest near branch points.
    """
    if a > b:
        raise ValueError("integration bounds must satisfy a <= b")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        x1 = 0.5 * (x0 + x2)
        lm = f(0.5 * (x0 + x1))
        rm = f(0.5 * (x1 + x2))
        left = _simpson(f0, lm, f1, x1 - x0)
        right = _simpson(f1, rm, f2, x2 - x1)
        err = left + right - whole
        if abs(err) <= 15.0 * eps:
            return left + right + err / 15.0
        if depth >= max_depth:
            raise RuntimeError(
                f"quadrature did not converge on [{x0}, {x2}] "
                f"(residual error estimate {abs(err) / 15.0:.3e})"
            )
        return recurse(x0, x1, f0, lm, f1, left, 0.5 * eps, depth + 1) + recurse(
            x1, x2, f1, rm, f2, right, 0.5 * eps, depth + 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(fa, fm, fb, b - a)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo result: mean, standard error, and 95% interval."""

    mean: float
    std_error: float
    ci95_low: float
    ci95_high: float
    n_samples: int
    seed: int


@dataclass
class StreamingStats:
    """Single-pass central-moment accumulator supporting parallel merge.

    Tracks count, mean, and the second through fourth central moment sums;
    enough for the mean's standard error and for the standard error of the
    sample variance.  ``merge`` implements the pairwise update so that any
    merge-tree shape gives the same result up to rounding.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0

    def push(self, x: float) -> None:
        n1 = self.count
        self.count += 1
        n = self.count
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += (
            term1 * delta_n2 * (n * n - 3 * n + 3)
            + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3
        )
        self.m3 += term1 * delta_n * (n - 2) - 3.0 * delta_n * self.m2
        self.m2 += term1

    @classmethod
    def from_values(cls, xs: np.ndarray) -> "StreamingStats":
        """Accumulate a whole array at once (two-pass central sums)."""
        xs = np.asarray(xs, dtype=float)
        n = xs.size
        if n == 0:
            return cls()
        mean = float(xs.mean())
        d = xs - mean
        d2 = d * d
        return cls(
            count=n,
            mean=mean,
            m2=float(d2.sum()),
            m3=float((d2 * d).sum()),
            m4=float((d2 * d2).sum()),
        )

    def merge(self, other: "StreamingStats") -> "StreamingStats":
        """Combine two disjoint accumulations; associative and commutative
        up to floating-point rounding."""
        na, nb = self.count, other.count
        if na == 0:
            return StreamingStats(nb, other.mean, other.m2, other.m3, other.m4)
        if nb == 0:
            return StreamingStats(na, self.mean, self.m2, self.m3, self.m4)
        n = na + nb
        delta = other.mean - self.mean
        delta2 = delta * delta
        mean = self.mean + delta * nb / n
        m2 = self.m2 + other.m2 + delta2 * na * nb / n
        m3 = (
            self.m3
            + other.m3
            + delta * delta2 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n
        )
        m4 = (
            self.m4
            + other.m4
            + delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) / (n**3)
            + 6.0 * delta2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n
        )
        return StreamingStats(n, mean, m2, m3, m4)

    @property
    def variance(self) -> float:
        """Unbiased sample variance (clamped at 0 against rounding)."""
        if self.count < 2:
            raise ValueError("variance needs at least 2 samples")
        return max(0.0, self.m2 / (self.count - 1))

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.count)

    @property
    def variance_std_error(self) -> float:
        """Asymptotic standard error of the sample variance."""
        if self.count < 2:
            raise ValueError("variance needs at least 2 samples")
        n = self.count
        m2 = self.m2 / n
        m4 = self.m4 / n
        return math.sqrt(max(0.0, m4 - m2 * m2) / n)

    def finalize(self, seed: int) -> Estimate:
        """Freeze into an Estimate; requires count >= 2."""
        if self.count < 2:
            raise ValueError("finalize needs at least 2 samples")
        se = self.std_error
        return Estimate(
            mean=self.mean,
            std_error=se,
            ci95_low=self.mean - Z95 * se,
            ci95_high=self.mean + Z95 * se,
            n_samples=self.count,
            seed=seed,
        )


def merge_all(parts) -> StreamingStats:
    """Fold accumulators in the order given (fixed order keeps reruns
    byte-identical regardless of how the parts were computed)."""
    total = StreamingStats()
    for p in parts:
        total = total.merge(p)
    return total
