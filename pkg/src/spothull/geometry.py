"""Planar primitives: polygons, hulls, containment, and a grid spatial index.

Orientation convention: rings are stored open (no repeated last vertex);
exterior rings have positive shoelace area, holes negative. The geometric
epsilon used for boundary tests scales with the bounding-box diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GeometryError

EPS_SCALE = 1e-9  # boundary tolerance = EPS_SCALE * bbox diagonal

Point = tuple[float, float]
Ring = tuple[Point, ...]

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"


def signed_area(ring) -> float:
    """Shoelace area of a closed ring given as open vertex list; + is CCW."""
    pts = np.asarray(ring, dtype=np.float64)
    if pts.shape[0] < 3:
        raise GeometryError("ring needs at least 3 vertices")
    x = pts[:, 0]
    y = pts[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) / 2.0)


def _canonical_ring(ring: Ring) -> Ring:
    """Rotate so the lexicographically smallest vertex comes first."""
    start = min(range(len(ring)), key=lambda i: ring[i])
    return ring[start:] + ring[:start]


def _as_ring(points) -> Ring:
    ring = tuple((float(x), float(y)) for x, y in points)
    if len(ring) >= 2 and ring[0] == ring[-1]:
        ring = ring[:-1]
    return ring


@dataclass(frozen=True)
class Polygon:
    exterior: Ring
    holes: tuple[Ring, ...] = ()

    @staticmethod
    def make(exterior, holes=()) -> "Polygon":
        """Normalize orientation (exterior CCW, holes CW) and ring start."""
        ext = _as_ring(exterior)
        if len(ext) < 3:
            raise GeometryError("polygon exterior needs at least 3 vertices")
        if signed_area(ext) == 0.0:
            raise GeometryError("polygon exterior has zero area")
        if signed_area(ext) < 0:
            ext = ext[::-1]
        norm_holes = []
        for h in holes:
            ring = _as_ring(h)
            if len(ring) < 3 or signed_area(ring) == 0.0:
                continue
            if signed_area(ring) > 0:
                ring = ring[::-1]
            norm_holes.append(_canonical_ring(ring))
        return Polygon(_canonical_ring(ext), tuple(norm_holes))

    def rings(self) -> tuple[Ring, ...]:
        return (self.exterior,) + self.holes

    def area(self) -> float:
        return signed_area(self.exterior) + sum(signed_area(h) for h in self.holes)

    def bounding_box(self) -> tuple[float, float, float, float]:
        pts = np.asarray(self.exterior)
        return (
            float(pts[:, 0].min()),
            float(pts[:, 1].min()),
            float(pts[:, 0].max()),
            float(pts[:, 1].max()),
        )

    def epsilon(self) -> float:
        x0, y0, x1, y1 = self.bounding_box()
        return EPS_SCALE * float(np.hypot(x1 - x0, y1 - y0))


@dataclass(frozen=True)
class Degenerate:
    """Point sets with no 2-D extent (single point or collinear segment)."""

    kind: str  # "point" | "segment"
    points: Ring


def convex_hull(points):
    """Monotone-chain convex hull; returns Polygon or Degenerate marker."""
    idx = convex_hull_indices(np.asarray(points, dtype=np.float64).reshape(-1, 2))
    pts = [tuple(map(float, p)) for p in np.asarray(points, dtype=np.float64).reshape(-1, 2)]
    if isinstance(idx, Degenerate):
        return idx
    return Polygon.make([pts[i] for i in idx])


def convex_hull_indices(pts: np.ndarray):
    """Indices of hull vertices in CCW order, or a Degenerate marker.

    Collinear boundary points are excluded (strict turns only).
    """
    n = pts.shape[0]
    if n == 0:
        raise GeometryError("empty point set")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    dedup: list[int] = []
    for i in order:
        if not dedup or tuple(pts[i]) != tuple(pts[dedup[-1]]):
            dedup.append(int(i))
    if len(dedup) == 1:
        return Degenerate("point", (tuple(map(float, pts[dedup[0]])),))

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
            pts[a, 1] - pts[o, 1]
        ) * (pts[b, 0] - pts[o, 0])

    lower: list[int] = []
    for i in dedup:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(dedup):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        ends = (tuple(map(float, pts[dedup[0]])), tuple(map(float, pts[dedup[-1]])))
        return Degenerate("segment", ends)
    return hull


def segment_point_distance(a, b, p) -> float:
    d = kernels.segment_distances(
        np.array([float(p[0])]),
        np.array([float(p[1])]),
        float(a[0]),
        float(a[1]),
        float(b[0]),
        float(b[1]),
    )
    return float(d[0])


def polygon_codes(points: np.ndarray, poly: Polygon, eps: float | None = None) -> np.ndarray:
    """Vectorized classification: 0 outside, 1 inside, 2 boundary.

    Even-odd across all rings; a point within eps of any ring edge is
    boundary (holes subtract containment, their edges still count as
    polygon boundary).
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if eps is None:
        eps = poly.epsilon()
    px = np.ascontiguousarray(pts[:, 0])
    py = np.ascontiguousarray(pts[:, 1])
    parity = np.zeros(len(pts), dtype=bool)
    boundary = np.zeros(len(pts), dtype=bool)
    for ring in poly.rings():
        arr = np.asarray(ring, dtype=np.float64)
        codes = kernels.ring_codes(
            px, py, np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]), eps
        )
        boundary |= codes == 2
        parity ^= codes == 1
    out = np.zeros(len(pts), dtype=np.int8)
    out[parity] = 1
    out[boundary] = 2
    return out


def point_in_polygon(p, poly: Polygon, eps: float | None = None) -> str:
    code = polygon_codes(np.array([p], dtype=np.float64), poly, eps)[0]
    return (OUTSIDE, INSIDE, BOUNDARY)[code]


def ring_is_simple(ring: Ring, tol: float = 0.0) -> bool:
    """True when no two edges intersect away from shared endpoints.

    Repeated vertex coordinates (pinches) and collinear spikes fail;
    straight-through collinear vertices pass.
    """
    n = len(ring)
    if n < 3:
        return False
    if len(set(ring)) != n:
        return False
    pts = np.asarray(ring, dtype=np.float64)
    x1 = np.ascontiguousarray(pts[:, 0])
    y1 = np.ascontiguousarray(pts[:, 1])
    x2 = np.ascontiguousarray(np.roll(x1, -1))
    y2 = np.ascontiguousarray(np.roll(y1, -1))
    for i in range(n - 1):
        if kernels.segment_blocked(
            x1[i], y1[i], x2[i], y2[i],
            x1[i + 1:], y1[i + 1:], x2[i + 1:], y2[i + 1:], tol,
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# grid spatial index
# ---------------------------------------------------------------------------

class SpatialIndex:
    """Uniform-grid index over 2-D points; queries match brute force exactly."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        if len(pts) == 0:
            raise GeometryError("cannot index an empty point set")
        self.points = pts
        self._x0 = float(pts[:, 0].min())
        self._y0 = float(pts[:, 1].min())
        w = float(pts[:, 0].max()) - self._x0
        h = float(pts[:, 1].max()) - self._y0
        # aim for O(1) points per cell; degenerate extents fall back to 1.0
        cell = max(w, h) / max(1.0, np.sqrt(len(pts)))
        self._cell = cell if cell > 0 else 1.0
        cx = np.floor((pts[:, 0] - self._x0) / self._cell).astype(np.int64)
        cy = np.floor((pts[:, 1] - self._y0) / self._cell).astype(np.int64)
        self._buckets: dict[tuple[int, int], np.ndarray] = {}
        order = np.lexsort((np.arange(len(pts)), cy, cx))
        keys = np.stack([cx[order], cy[order]], axis=1)
        start = 0
        for i in range(1, len(order) + 1):
            if i == len(order) or (keys[i] != keys[start]).any():
                self._buckets[(int(keys[start, 0]), int(keys[start, 1]))] = order[start:i]
                start = i
        self._key_lo = (int(cx.min()), int(cy.min()))
        self._key_hi = (int(cx.max()), int(cy.max()))

    def __len__(self) -> int:
        return len(self.points)

    def _cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (
            int(np.floor((x - self._x0) / self._cell)),
            int(np.floor((y - self._y0) / self._cell)),
        )

    def range(self, rect) -> np.ndarray:
        """Ids of points inside the inclusive rect (x0, y0, x1, y1), ascending."""
        x0, y0, x1, y1 = map(float, rect)
        if x1 < x0 or y1 < y0:
            return np.empty(0, dtype=np.int64)
        c0x, c0y = self._cell_of(x0, y0)
        c1x, c1y = self._cell_of(x1, y1)
        found = []
        for gx in range(c0x, c1x + 1):
            for gy in range(c0y, c1y + 1):
                ids = self._buckets.get((gx, gy))
                if ids is not None:
                    found.append(ids)
        if not found:
            return np.empty(0, dtype=np.int64)
        cand = np.concatenate(found)
        p = self.points[cand]
        mask = (p[:, 0] >= x0) & (p[:, 0] <= x1) & (p[:, 1] >= y0) & (p[:, 1] <= y1)
        return np.sort(cand[mask])

    def nearest(self, q, n: int) -> np.ndarray:
        """Ids of the n nearest points to q, sorted by (distance, id)."""
        qx, qy = float(q[0]), float(q[1])
        total = len(self.points)
        n = min(n, total)
        if n <= 0:
            return np.empty(0, dtype=np.int64)
        cqx, cqy = self._cell_of(qx, qy)
        seen: list[np.ndarray] = []
        ring = 0
        while True:
            shell = []
            for gx in range(cqx - ring, cqx + ring + 1):
                for gy in range(cqy - ring, cqy + ring + 1):
                    if max(abs(gx - cqx), abs(gy - cqy)) != ring:
                        continue
                    ids = self._buckets.get((gx, gy))
                    if ids is not None:
                        shell.append(ids)
            if shell:
                seen.append(np.concatenate(shell))
            covered_all = (
                cqx - ring <= self._key_lo[0]
                and cqy - ring <= self._key_lo[1]
                and cqx + ring >= self._key_hi[0]
                and cqy + ring >= self._key_hi[1]
            )
            if seen:
                cand = np.concatenate(seen)
                d = np.hypot(self.points[cand, 0] - qx, self.points[cand, 1] - qy)
                order = np.lexsort((cand, d))
                best = cand[order][:n]
                if covered_all:
                    return best
                # any unexamined point sits at least ring*cell away; strict
                # comparison keeps (distance, id) ties exact
                if len(best) == n and float(d[order][n - 1]) < ring * self._cell:
                    return best
            ring += 1


def index_build(points) -> SpatialIndex:
    return SpatialIndex(points)


def index_range(index: SpatialIndex, rect) -> np.ndarray:
    return index.range(rect)


def index_nearest(index: SpatialIndex, q, n: int) -> np.ndarray:
    return index.nearest(q, n)
