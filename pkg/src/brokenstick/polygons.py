"""Areas of triangles and maximal (cyclic) polygons for a given side multiset.

The area-maximizing polygon over all orderings and shapes with fixed side
lengths is the one inscribed in a circle.  ``max_cyclic_area`` solves for
that circle's radius by bracketed bisection on the central-angle closure
residual, handling both the center-inside and center-outside configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import find_root
from .sampling import forms_kgon

# Radicand round-off this small is treated as a degenerate (zero-area) shape.
_RADICAND_TOL = 1e-12


def heron_area(a: float, b: float, c: float) -> float:
    """Triangle area from side lengths; degenerate inputs give 0."""
    s = (a + b + c) / 2.0
    rad = s * (s - a) * (s - b) * (s - c)
    if rad < -_RADICAND_TOL:
        raise ValueError(f"sides ({a}, {b}, {c}) do not bound a triangle")
    return math.sqrt(max(rad, 0.0))


def brahmagupta_area(a: float, b: float, c: float, d: float) -> float:
    """Area of the cyclic (maximal) quadrilateral with the given sides."""
    if not forms_kgon((a, b, c, d)):
        raise ValueError(f"sides ({a}, {b}, {c}, {d}) do not bound a quadrilateral")
    s = (a + b + c + d) / 2.0
    rad = (s - a) * (s - b) * (s - c) * (s - d)
    return math.sqrt(max(rad, 0.0))


@dataclass(frozen=True)
class CyclicSolution:
    """Solved circumscribed configuration for a side multiset.

    ``central_angles[i]`` is the angle subtended at the circle's center by
    side i.  With the center inside the polygon the angles sum to 2*pi; with
    the center outside (beyond the longest side) the longest side's angle
    equals the sum of the others and its area contribution is negative.
    """

    circumradius: float
    center_inside: bool
    central_angles: tuple[float, ...]
    area: float
    residual: float


def _angle(side: float, radius: float) -> float:
    # clamp guards the R == max_side/2 endpoint against rounding above 1
    return 2.0 * math.asin(min(1.0, side / (2.0 * radius)))


def max_cyclic_area(sides, tol: float = 1e-12, max_iter: int = 200) -> CyclicSolution:
    """Area of the largest polygon with the given sides (the cyclic one).

    Bisects the circumradius on [max(sides)/2, ...): first on the
    center-inside closure residual sum(angles) - 2*pi, which is strictly
    decreasing in R; if that residual is already negative at the smallest
    admissible radius, the center lies beyond the longest side and the
    residual switches to sum(other angles) - angle(longest).  The upper
    bracket starts at the perimeter and expands geometrically, since
    near-degenerate side lists have arbitrarily large circumradii.
    """
    sides = tuple(float(s) for s in sides)
    if len(sides) < 3:
        raise ValueError("a polygon needs at least 3 sides")
    if any(s <= 0 for s in sides):
        raise ValueError("side lengths must be positive")
    if not forms_kgon(sides):
        raise ValueError("max side must be shorter than the sum of the others")
    if tol <= 0:
        raise ValueError("tol must be positive")

    longest = max(sides)
    imax = sides.index(longest)
    perimeter = math.fsum(sides)
    r_min = longest / 2.0

    def residual_inside(r):
        return math.fsum(_angle(s, r) for s in sides) - 2.0 * math.pi

    def residual_outside(r):
        other = math.fsum(_angle(s, r) for i, s in enumerate(sides) if i != imax)
        return other - _angle(longest, r)

    center_inside = residual_inside(r_min) >= 0.0
    residual = residual_inside if center_inside else residual_outside

    hi = perimeter
    if not center_inside:
        # residual_outside tends to 0+ as R grows; expand until the bracket
        # actually straddles the root.
        expansions = 0
        while residual(hi) < 0.0:
            hi *= 4.0
            expansions += 1
            if expansions > 200:
                raise RuntimeError("circumradius bracket expansion failed")
    radius = find_root(residual, r_min, hi, tol=tol, max_iter=max_iter)

    angles = tuple(_angle(s, radius) for s in sides)
    res = residual(radius)
    area = 0.0
    for i, theta in enumerate(angles):
        contrib = 0.5 * radius * radius * math.sin(theta)
        if not center_inside and i == imax:
            contrib = -contrib
        area += contrib
    return CyclicSolution(
        circumradius=radius,
        center_inside=center_inside,
        central_angles=angles,
        area=area,
        residual=res,
    )


def _cyclic_vertices(sides, solution: CyclicSolution):
    """Vertices of the solved polygon on its circumcircle (closure check)."""
    imax = sides.index(max(sides))
    phi = 0.0
    pts = []
    r = solution.circumradius
    for i, theta in enumerate(solution.central_angles):
        pts.append((r * math.cos(phi), r * math.sin(phi)))
        step = -theta if (not solution.center_inside and i == imax) else theta
        phi += step
    pts.append((r * math.cos(phi), r * math.sin(phi)))
    return pts
