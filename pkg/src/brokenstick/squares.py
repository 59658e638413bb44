"""Square-fracture models: center lines and perimeter chords.

Two ways to break the unit square: lines through the center (side pair
chosen by fair coin, intercept uniform on the side) and chords joining two
uniform perimeter points (a same-side pair is a degenerate chord that cuts
nothing).  Regions are maintained exactly as convex polygons; every cut is
the restriction of its supporting line to the square, so splitting all
regions by the supporting line realizes both models.

``split_regions`` is the readable reference implementation; the bulk
experiments run the identically-specified compiled kernel in
``_kernels.run_square_cuts`` and the two are cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._chunked import run_chunked
from .numerics import Estimate, StreamingStats, merge_all

Point = tuple[float, float]

CENTER = (0.5, 0.5)
# central disk of area 1/2: a cut missing it leaves a region of area >= 1/2
DISK_RADIUS = (2.0 * math.pi) ** -0.5

_BOUNDARY_TOL = 1e-12


def boundary_point(s: float) -> Point:
    """Point at perimeter coordinate s in [0, 4): side floor(s), offset
    s - floor(s), walking counterclockwise from (0, 0)."""
    s = s % 4.0
    side = int(s)
    t = s - side
    if side == 0:
        return (t, 0.0)
    if side == 1:
        return (1.0, t)
    if side == 2:
        return (1.0 - t, 1.0)
    return (0.0, 1.0 - t)


@dataclass(frozen=True)
class SquareLine:
    """A cut of the unit square with endpoints on its boundary."""

    kind: str  # 'center-line' | 'chord' | 'degenerate-chord'
    p1: Point
    p2: Point

    def validate(self) -> None:
        for x, y in (self.p1, self.p2):
            on_x = min(abs(x), abs(1.0 - x)) <= _BOUNDARY_TOL
            on_y = min(abs(y), abs(1.0 - y)) <= _BOUNDARY_TOL
            inside = -_BOUNDARY_TOL <= x <= 1.0 + _BOUNDARY_TOL and -_BOUNDARY_TOL <= y <= 1.0 + _BOUNDARY_TOL
            if not (inside and (on_x or on_y)):
                raise ValueError(f"endpoint ({x}, {y}) not on the square boundary")
        if self.kind == "center-line":
            mx = 0.5 * (self.p1[0] + self.p2[0])
            my = 0.5 * (self.p1[1] + self.p2[1])
            if abs(mx - 0.5) > _BOUNDARY_TOL or abs(my - 0.5) > _BOUNDARY_TOL:
                raise ValueError("center line does not pass through the center")


def sample_center_line(stream: np.random.Generator) -> SquareLine:
    """Line through (1/2, 1/2): side pair by fair coin, intercept uniform.

    Joins (0, u)-(1, 1-u) when the coin picks the left/right pair, else
    (u, 0)-(1-u, 1).
    """
    u = stream.random(2)
    t = float(u[1])
    if u[0] < 0.5:
        return SquareLine("center-line", (0.0, t), (1.0, 1.0 - t))
    return SquareLine("center-line", (t, 0.0), (1.0 - t, 1.0))


def sample_chord(stream: np.random.Generator) -> SquareLine:
    """Chord joining two independent uniform perimeter points.

    Side chosen with probability 1/4 each, position uniform on the side
    (one uniform draw per endpoint via the perimeter coordinate).  Both
    points on one side make a degenerate chord, which splits nothing.
    """
    u = stream.random(2)
    s1, s2 = 4.0 * float(u[0]), 4.0 * float(u[1])
    kind = "degenerate-chord" if int(s1) == int(s2) else "chord"
    return SquareLine(kind, boundary_point(s1), boundary_point(s2))


@dataclass(frozen=True)
class ConvexRegion:
    """Convex polygon, vertices in counterclockwise order."""

    vertices: tuple[Point, ...]

    @property
    def area(self) -> float:
        acc = 0.0
        pts = self.vertices
        for j, (x, y) in enumerate(pts):
            xn, yn = pts[(j + 1) % len(pts)]
            acc += x * yn - xn * y
        return abs(acc) * 0.5

    def is_convex(self, tol: float = 1e-10) -> bool:
        pts = self.vertices
        m = len(pts)
        sign = 0
        for j in range(m):
            ax = pts[j][0] - pts[j - 1][0]
            ay = pts[j][1] - pts[j - 1][1]
            bx = pts[(j + 1) % m][0] - pts[j][0]
            by = pts[(j + 1) % m][1] - pts[j][1]
            cr = ax * by - ay * bx
            if cr > tol:
                if sign < 0:
                    return False
                sign = 1
            elif cr < -tol:
                if sign > 0:
                    return False
                sign = -1
        return True

    def effective_vertex_count(self, tol: float = _kernels.COLLINEAR) -> int:
        """Vertex count after merging collinear boundary vertices, which
        repeated splitting creates."""
        pts = self.vertices
        m = len(pts)
        count = 0
        for j in range(m):
            ax = pts[j][0] - pts[j - 1][0]
            ay = pts[j][1] - pts[j - 1][1]
            bx = pts[(j + 1) % m][0] - pts[j][0]
            by = pts[(j + 1) % m][1] - pts[j][1]
            la = math.hypot(ax, ay)
            lb = math.hypot(bx, by)
            if la <= 0.0 or lb <= 0.0:
                continue
            if abs(ax * by - ay * bx) > tol * la * lb:
                count += 1
        return count

    def is_triangle(self) -> bool:
        return self.effective_vertex_count() == 3


@dataclass(frozen=True)
class RegionSet:
    """Convex regions partitioning the unit square."""

    regions: tuple[ConvexRegion, ...]
    discarded: int = 0

    @property
    def total_area(self) -> float:
        return math.fsum(r.area for r in self.regions)


def unit_square() -> RegionSet:
    return RegionSet((ConvexRegion(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))),))


def _split_one(region: ConvexRegion, nx: float, ny: float, c: float):
    """Split one convex region by the line nx*x + ny*y = c.

    Returns a list of 1 or 2 regions plus the number of dropped slivers.
    Vertices within SNAP of the line are snapped onto it and shared by both
    parts; parts thinner than MIN_AREA are discarded.
    """
    pts = region.vertices
    ds = []
    haspos = hasneg = False
    for x, y in pts:
        d = nx * x + ny * y - c
        if abs(d) <= _kernels.SNAP:
            d = 0.0
        ds.append(d)
        haspos = haspos or d > 0.0
        hasneg = hasneg or d < 0.0
    if not (haspos and hasneg):
        return [region], 0

    pos: list[Point] = []
    neg: list[Point] = []
    m = len(pts)
    for j in range(m):
        dj = ds[j]
        djn = ds[(j + 1) % m]
        pj = pts[j]
        if dj >= 0.0 and (not pos or pos[-1] != pj):
            pos.append(pj)
        if dj <= 0.0 and (not neg or neg[-1] != pj):
            neg.append(pj)
        if (dj > 0.0 and djn < 0.0) or (dj < 0.0 and djn > 0.0):
            t = dj / (dj - djn)
            pn = pts[(j + 1) % m]
            ipt = (pj[0] + t * (pn[0] - pj[0]), pj[1] + t * (pn[1] - pj[1]))
            pos.append(ipt)
            neg.append(ipt)
    for part in (pos, neg):
        if len(part) > 1 and part[0] == part[-1]:
            part.pop()

    out = []
    dropped = 0
    for part in (pos, neg):
        r = ConvexRegion(tuple(part))
        if len(part) >= 3 and r.area >= _kernels.MIN_AREA:
            out.append(r)
        else:
            dropped += 1
    if not out:
        return [region], 0
    return out, dropped if len(out) < 2 else 0


def split_regions(rs: RegionSet, line: SquareLine) -> RegionSet:
    """Split every region crossed by the line's supporting line.

    Total area is preserved (up to dropped slivers below MIN_AREA, which
    are counted in ``discarded``).  Degenerate chords are rejected: they
    lie along a side and split nothing.
    """
    if line.kind == "degenerate-chord":
        raise ValueError("degenerate chords perform no split")
    (x1, y1), (x2, y2) = line.p1, line.p2
    dx, dy = x2 - x1, y2 - y1
    norm = math.hypot(dx, dy)
    if norm < 1e-15:
        raise ValueError("cut endpoints coincide")
    nx, ny = dy / norm, -dx / norm
    c = nx * x1 + ny * y1
    regions: list[ConvexRegion] = []
    discarded = rs.discarded
    for region in rs.regions:
        parts, dropped = _split_one(region, nx, ny, c)
        regions.extend(parts)
        discarded += dropped
    return RegionSet(tuple(regions), discarded)


def cut_square(lines) -> RegionSet:
    """Apply a sequence of cuts to the unit square (reference path).

    Degenerate chords are skipped, matching their no-op role in the chord
    model.
    """
    rs = unit_square()
    for line in lines:
        if line.kind == "degenerate-chord":
            continue
        rs = split_regions(rs, line)
    return rs


def dump_regions(rs: RegionSet) -> str:
    """Structured text dump of a region set (debugging aid).

    Line 1: ``regions=<count> total_area=<sum> discarded=<dropped>``;
    then one line per region: ``region <i>: area=<a> vertices=x,y;x,y;...``.
    """
    lines = [f"regions={len(rs.regions)} total_area={rs.total_area!r} discarded={rs.discarded}"]
    for i, region in enumerate(rs.regions):
        verts = ";".join(f"{x!r},{y!r}" for x, y in region.vertices)
        lines.append(f"region {i}: area={region.area!r} vertices={verts}")
    return "\n".join(lines) + "\n"


def expected_center_line_triangles(n: int) -> float:
    """Expected triangle count for n center lines: 2n - 4 + (1/2)^(n-2)."""
    if n < 1:
        raise ValueError("need n >= 1 lines")
    return 2.0 * n - 4.0 + 0.5 ** (n - 2)


def expected_chord_regions(n: int) -> float:
    """Expected region count for n chords: 17/64 C(n,2) + 3n/4 + 1."""
    if n < 0:
        raise ValueError("need n >= 0 chords")
    return 17.0 / 64.0 * math.comb(n, 2) + 0.75 * n + 1.0


def center_triangle_area_expression(n: int) -> float:
    """Closed-form candidate for the mean area of a random triangular region
    under n center lines.

    As printed it evaluates above the unit-square bound (7.6 at n = 3), so
    it appears to be missing a normalization factor; it is reported next to
    the Monte Carlo estimate for comparison and never used as a gate.
    """
    if n < 3:
        raise ValueError("expression defined for n >= 3")
    num = n**3 + 2 ** (n + 1) * (2 * n**2 - n + 5) - 9 * n - 16
    return num / ((n + 2) * (n + 1) * (n - 1))


def _center_line_endpoints(u: np.ndarray):
    coin = u[..., 0] < 0.5
    t = u[..., 1]
    x1 = np.where(coin, 0.0, t)
    y1 = np.where(coin, t, 0.0)
    x2 = np.where(coin, 1.0, 1.0 - t)
    y2 = np.where(coin, 1.0 - t, 1.0)
    return x1, y1, x2, y2


def _boundary_xy(s: np.ndarray):
    side = np.floor(s).astype(np.int64)
    t = s - side
    x = np.where(side == 0, t, np.where(side == 1, 1.0, np.where(side == 2, 1.0 - t, 0.0)))
    y = np.where(side == 0, 0.0, np.where(side == 1, t, np.where(side == 2, 1.0, 1.0 - t)))
    return x, y, side


@dataclass(frozen=True)
class CenterLineReport:
    """Aggregates of the center-line fracture experiment."""

    n: int
    samples: int
    seed: int
    region_count_ok: bool          # every sample produced exactly 2n regions
    bad_region_samples: int
    triangles: Estimate
    triangles_expected: float
    max_area: Estimate
    p_max_area_ge_half: Estimate
    triangle_area_mean: Estimate | None   # mean area of a uniformly chosen triangle
    triangle_area_expression: float | None  # ungated closed-form candidate
    area_sum_max_error: float
    discarded: int
    flagged: int


def center_line_experiment(
    n: int, seed: int, samples: int, workers: int = 1
) -> CenterLineReport:
    """Cut the square with n random center lines, per sample."""
    if n < 1:
        raise ValueError("need n >= 1 lines")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        u = stream.random((count, n, 2))
        x1, y1, x2, y2 = _center_line_endpoints(u)
        active = np.ones((count, n), dtype=np.bool_)
        nreg, total, amax, ntri, trisum, disc, flag = _kernels.run_square_cuts(
            x1, y1, x2, y2, active
        )
        bad = int((nreg != 2 * n).sum())
        has_tri = ntri > 0
        tri_mean = StreamingStats.from_values(trisum[has_tri] / ntri[has_tri])
        return (
            bad,
            StreamingStats.from_values(ntri.astype(float)),
            StreamingStats.from_values(amax),
            StreamingStats.from_values(amax >= 0.5),
            tri_mean,
            float(np.abs(total - 1.0).max()),
            int(disc.sum()),
            int(flag.sum()),
        )

    parts = run_chunked(worker, samples, seed, workers)
    bad = sum(r[0] for r in parts)
    tri_mean_stats = merge_all(r[4] for r in parts)
    return CenterLineReport(
        n=n,
        samples=samples,
        seed=seed,
        region_count_ok=bad == 0,
        bad_region_samples=bad,
        triangles=merge_all(r[1] for r in parts).finalize(seed),
        triangles_expected=expected_center_line_triangles(n),
        max_area=merge_all(r[2] for r in parts).finalize(seed),
        p_max_area_ge_half=merge_all(r[3] for r in parts).finalize(seed),
        triangle_area_mean=(
            tri_mean_stats.finalize(seed) if tri_mean_stats.count >= 2 else None
        ),
        triangle_area_expression=(
            center_triangle_area_expression(n) if n >= 3 else None
        ),
        area_sum_max_error=max(r[5] for r in parts),
        discarded=sum(r[6] for r in parts),
        flagged=sum(r[7] for r in parts),
    )


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


@dataclass(frozen=True)
class ChordReport:
    """Aggregates of the perimeter-chord fracture experiment."""

    n: int
    samples: int
    seed: int
    regions: Estimate                     # geometric region count
    regions_expected: float
    intersection_prob: Estimate | None    # per-pair interior crossing rate
    max_area: Estimate                    # degenerate-only samples keep max = 1
    max_area_given_cut: Estimate | None   # conditional on >= 1 effective chord
    p_max_area_ge_half: Estimate
    counts_agree: bool                    # geometric == combinatorial, unflagged samples
    mismatched_unflagged: int
    area_sum_max_error: float
    discarded: int
    flagged: int


def chord_experiment(n: int, seed: int, samples: int, workers: int = 1) -> ChordReport:
    """Cut the square with n random perimeter chords, per sample.

    Tracks the geometric region count alongside the combinatorial count
    1 + effective chords + interior pairwise intersections; the two must
    agree except on flagged samples (near-concurrent or near-tangent
    geometry).
    """
    if n < 0:
        raise ValueError("need n >= 0 chords")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        u = stream.random((count, n, 2)) if n else np.zeros((count, 0, 2))
        s1 = 4.0 * u[..., 0]
        s2 = 4.0 * u[..., 1]
        x1, y1, side1 = _boundary_xy(s1)
        x2, y2, side2 = _boundary_xy(s2)
        nondeg = side1 != side2
        nreg, total, amax, _ntri, _trisum, disc, flag = _kernels.run_square_cuts(
            x1, y1, x2, y2, nondeg
        )
        flagged = flag.astype(bool)

        eff = nondeg.sum(axis=1)
        ncross = np.zeros(count, dtype=np.int64)
        cross_frac = None
        if n >= 2:
            dx = x2 - x1
            dy = y2 - y1
            crossing = np.zeros((count, n, n), dtype=bool)
            tpar = np.full((count, n, n), np.nan)
            for i in range(n):
                for j in range(i + 1, n):
                    d1 = _cross(dx[:, i], dy[:, i], x1[:, j] - x1[:, i], y1[:, j] - y1[:, i])
                    d2 = _cross(dx[:, i], dy[:, i], x2[:, j] - x1[:, i], y2[:, j] - y1[:, i])
                    d3 = _cross(dx[:, j], dy[:, j], x1[:, i] - x1[:, j], y1[:, i] - y1[:, j])
                    d4 = _cross(dx[:, j], dy[:, j], x2[:, i] - x1[:, j], y2[:, i] - y1[:, j])
                    hit = (d1 * d2 < 0) & (d3 * d4 < 0) & nondeg[:, i] & nondeg[:, j]
                    crossing[:, i, j] = hit
                    ncross += hit
                    denom = _cross(dx[:, i], dy[:, i], dx[:, j], dy[:, j])
                    with np.errstate(divide="ignore", invalid="ignore"):
                        # params of the crossing point along chords i and j
                        t_i = _cross(
                            x1[:, j] - x1[:, i], y1[:, j] - y1[:, i], dx[:, j], dy[:, j]
                        ) / denom
                        t_j = _cross(
                            x1[:, j] - x1[:, i], y1[:, j] - y1[:, i], dx[:, i], dy[:, i]
                        ) / denom
                    tpar[:, i, j] = np.where(hit, t_i, np.nan)
                    tpar[:, j, i] = np.where(hit, t_j, np.nan)
            # flag near-concurrency: two intersections nearly coincide on one
            # chord, or an intersection sits at a chord end
            tsorted = np.sort(tpar, axis=2)
            gaps = np.diff(tsorted, axis=2)
            near_conc = np.nanmin(gaps, axis=(1, 2), initial=np.inf) < 1e-9
            near_end = np.nanmin(
                np.minimum(tpar, 1.0 - tpar), axis=(1, 2), initial=np.inf
            ) < 1e-9
            flagged |= near_conc | near_end
            pairs = math.comb(n, 2)
            cross_frac = StreamingStats.from_values(ncross / pairs)

        comb_count = 1 + eff + ncross
        mismatch = int(((nreg != comb_count) & ~flagged).sum())
        cut = eff >= 1
        given_cut = StreamingStats.from_values(amax[cut]) if cut.any() else StreamingStats()
        return (
            StreamingStats.from_values(nreg.astype(float)),
            cross_frac,
            StreamingStats.from_values(amax),
            given_cut,
            StreamingStats.from_values(amax >= 0.5),
            mismatch,
            float(np.abs(total - 1.0).max()),
            int(disc.sum()),
            int(flagged.sum()),
        )

    parts = run_chunked(worker, samples, seed, workers)
    cross_stats = None
    if n >= 2:
        cross_stats = merge_all(r[1] for r in parts).finalize(seed)
    given_cut_stats = merge_all(r[3] for r in parts)
    return ChordReport(
        n=n,
        samples=samples,
        seed=seed,
        regions=merge_all(r[0] for r in parts).finalize(seed),
        regions_expected=expected_chord_regions(n),
        intersection_prob=cross_stats,
        max_area=merge_all(r[2] for r in parts).finalize(seed),
        max_area_given_cut=(
            given_cut_stats.finalize(seed) if given_cut_stats.count >= 2 else None
        ),
        p_max_area_ge_half=merge_all(r[4] for r in parts).finalize(seed),
        counts_agree=sum(r[5] for r in parts) == 0,
        mismatched_unflagged=sum(r[5] for r in parts),
        area_sum_max_error=max(r[6] for r in parts),
        discarded=sum(r[7] for r in parts),
        flagged=sum(r[8] for r in parts),
    )


def chord_misses_disk(line: SquareLine) -> bool:
    """True iff the chord's segment stays outside the central disk.

    The segment, not its supporting line, does the cutting; degenerate
    chords lie along a side and always miss.
    """
    if line.kind == "degenerate-chord":
        return True
    (x1, y1), (x2, y2) = line.p1, line.p2
    dx, dy = x2 - x1, y2 - y1
    l2 = dx * dx + dy * dy
    if l2 <= 0.0:
        return True
    t = max(0.0, min(1.0, ((0.5 - x1) * dx + (0.5 - y1) * dy) / l2))
    return math.hypot(x1 + t * dx - 0.5, y1 + t * dy - 0.5) >= DISK_RADIUS


def lambda_estimate(seed: int, samples: int, workers: int = 1) -> Estimate:
    """Frequency with which an effective chord misses the central disk.

    Degenerate (same-side) draws lie along the boundary and trivially miss;
    they are excluded from the denominator, so this estimates the miss rate
    of chords that actually cut.  The lower bound ``lambda^n`` stays valid:
    a degenerate chord certainly leaves the disk uncut, so requiring all n
    draws to miss is only more likely than the effective-only rate implies.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")

    def worker(stream, count):
        u = stream.random((count, 2))
        s1 = 4.0 * u[:, 0]
        s2 = 4.0 * u[:, 1]
        x1, y1, side1 = _boundary_xy(s1)
        x2, y2, side2 = _boundary_xy(s2)
        nondeg = side1 != side2
        dx, dy = x2 - x1, y2 - y1
        l2 = np.maximum(dx * dx + dy * dy, 1e-300)
        t = np.clip(((0.5 - x1) * dx + (0.5 - y1) * dy) / l2, 0.0, 1.0)
        dist = np.hypot(x1 + t * dx - 0.5, y1 + t * dy - 0.5)
        return StreamingStats.from_values((dist >= DISK_RADIUS)[nondeg])

    return merge_all(run_chunked(worker, samples, seed, workers)).finalize(seed)


def half_area_bounds(n: int, lam: float) -> tuple[float, float]:
    """Bracket for P(some region has area >= 1/2 after n chords):
    lower = lam^n (all cuts miss the central disk), upper = 3*(11/12)^(n/2)."""
    if n < 1:
        raise ValueError("need n >= 1 chords")
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda estimate must lie in (0, 1)")
    return lam**n, 3.0 * (11.0 / 12.0) ** (n / 2.0)
