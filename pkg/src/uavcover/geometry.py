"""Exact planar primitives: minimum enclosing circle, convex hull, coverage.

Point sets are (n, 2) float64 arrays (meters or grid cells; callers keep units
consistent). Containment tests are boundary-inclusive with a 1e-9 relative
tolerance, which is the tolerance the solvers' feasibility checks rely on.
"""

from dataclasses import dataclass

import numpy as np

from uavcover import kernels

COVER_RTOL = 1e-9


@dataclass(frozen=True)
class Disk:
    """A coverage disk: center (x, y) plus a non-negative radius."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not (self.radius >= 0.0 and np.isfinite(self.radius)):
            raise ValueError(f"radius must be finite and >= 0, got {self.radius}")

    def contains(self, x, y, rtol=COVER_RTOL):
        dx = x - self.center[0]
        dy = y - self.center[1]
        rr = self.radius * (1.0 + rtol)
        return dx * dx + dy * dy <= rr * rr


def as_points(points):
    """Validate and convert point input to a contiguous (n, 2) float64 array."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValueError("point coordinates must be finite")
    return pts


def minimum_enclosing_circle(points) -> Disk:
    """Smallest circle enclosing all points (expected O(n), deterministic)."""
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise ValueError("empty point set")
    cx, cy, r = kernels.mec(pts)
    return Disk(center=(cx, cy), radius=r)


def convex_hull(points):
    """Convex hull vertices in counter-clockwise order as an (h, 2) array.

    Duplicates are removed; collinear points never appear as hull vertices, so
    fully collinear input reduces to its two extreme points (one if all
    coincide). Empty input yields an empty array.
    """
    pts = as_points(points)
    if pts.shape[0] == 0:
        return pts
    uniq = np.unique(pts, axis=0)  # sorts lexicographically by (x, y)
    if uniq.shape[0] <= 2:
        return uniq

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in uniq[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return np.asarray(hull, dtype=np.float64)


def coverage_count(points, disks) -> int:
    """Number of points covered by at least one disk (boundary inclusive)."""
    pts = as_points(points)
    if pts.shape[0] == 0 or not disks:
        return 0
    covered = np.zeros(pts.shape[0], dtype=bool)
    for d in disks:
        covered |= kernels.covered_mask(pts, d.center[0], d.center[1], d.radius, COVER_RTOL)
    return int(covered.sum())
