"""Spatial grouping of same-cluster spots and concave hulls around groups.

The neighbor radius adapts to spot pitch (median nearest-neighbor distance
times a factor), so square and hex layouts both connect adjacent spots
without declaring a grid type. Hulls start from the convex hull and dig the
longest edges inward toward nearby points while the ring stays simple.
"""
from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GeometryError, ValidationError
from .geometry import (
    Degenerate,
    Polygon,
    SpatialIndex,
    convex_hull_indices,
    ring_is_simple,
)

log = logging.getLogger("spothull.regions")

DEFAULT_RADIUS_FACTOR = 1.5
DEFAULT_CONCAVITY = 2.0
DEFAULT_LENGTH_THRESHOLD = 0.0
DEFAULT_MIN_REGION_SIZE = 5


@dataclass(frozen=True, eq=False)
class NeighborGraph:
    adjacency: tuple[tuple[int, ...], ...]
    radius: float
    positions: np.ndarray

    def __len__(self) -> int:
        return len(self.adjacency)


@dataclass(frozen=True)
class SpotGroup:
    cluster: int
    members: tuple[int, ...]
    positions: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class RegionPolygon:
    id: str
    cluster: int
    polygon: Polygon
    group_id: int
    member_count: int


def build_neighbor_graph(positions, radius_factor: float = DEFAULT_RADIUS_FACTOR) -> NeighborGraph:
    """Symmetric proximity graph with radius = factor x median NN distance."""
    pts = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    if n < 2:
        raise ValidationError("neighbor graph needs at least 2 spots")
    if bool(np.all(pts == pts[0])):
        raise GeometryError("all spot positions identical")
    index = SpatialIndex(pts)
    nn = np.empty(n, dtype=np.float64)
    for i in range(n):
        pair = index.nearest(pts[i], 2)
        other = int(pair[1]) if int(pair[0]) == i else int(pair[0])
        nn[i] = math.hypot(pts[other, 0] - pts[i, 0], pts[other, 1] - pts[i, 1])
    radius = radius_factor * float(np.median(nn))

    adjacency = []
    for i in range(n):
        x, y = pts[i]
        ids = index.range((x - radius, y - radius, x + radius, y + radius))
        d = np.hypot(pts[ids, 0] - x, pts[ids, 1] - y)
        keep = ids[(d <= radius) & (ids != i)]
        adjacency.append(tuple(int(j) for j in keep))
    return NeighborGraph(adjacency=tuple(adjacency), radius=radius, positions=pts)


def same_label_components(graph: NeighborGraph, labels) -> list[SpotGroup]:
    """Connected components of the subgraph keeping only same-label edges."""
    lab = np.asarray(labels)
    n = len(graph)
    if len(lab) != n:
        raise ValidationError(f"labels length {len(lab)} does not match graph size {n}")

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, nbrs in enumerate(graph.adjacency):
        for j in nbrs:
            if j > i and lab[i] == lab[j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    members: dict[int, list[int]] = {}
    for i in range(n):
        members.setdefault(find(i), []).append(i)
    groups = [
        SpotGroup(
            cluster=int(lab[ms[0]]),
            members=tuple(ms),
            positions=tuple((float(graph.positions[m, 0]), float(graph.positions[m, 1])) for m in ms),
        )
        for ms in members.values()
    ]
    groups.sort(key=lambda g: (g.cluster, g.members[0]))
    return groups


def _edge_arrays(pts: np.ndarray, nxt: dict[int, int], skip: tuple[int, int]):
    pairs = [(u, v) for u, v in nxt.items() if (u, v) != skip]
    u = np.array([p[0] for p in pairs], dtype=np.int64)
    v = np.array([p[1] for p in pairs], dtype=np.int64)
    return (
        np.ascontiguousarray(pts[u, 0]),
        np.ascontiguousarray(pts[u, 1]),
        np.ascontiguousarray(pts[v, 0]),
        np.ascontiguousarray(pts[v, 1]),
    )


def concave_hull(
    points,
    concavity: float = DEFAULT_CONCAVITY,
    length_threshold: float = DEFAULT_LENGTH_THRESHOLD,
    min_region_size: int = DEFAULT_MIN_REGION_SIZE,
):
    """Concave hull by longest-edge digging; Polygon or Degenerate marker.

    Each convex-hull edge is considered once, longest first. An edge digs to
    the point with the smallest distance to it (ties to the lowest index)
    when that distance is under edge_length / concavity and the two new
    edges cross no current ring edge. concavity=inf reproduces the convex
    hull; groups under min_region_size stay as points.
    """
    pts = np.ascontiguousarray(np.asarray(points, dtype=np.float64).reshape(-1, 2))
    m = len(pts)
    if not concavity >= 1.0:
        raise ValidationError(f"concavity must be >= 1, got {concavity}")
    if m < min_region_size:
        return Degenerate("sparse", tuple((float(x), float(y)) for x, y in pts))
    hull = convex_hull_indices(pts)
    if isinstance(hull, Degenerate):
        return hull

    nxt = {hull[i]: hull[(i + 1) % len(hull)] for i in range(len(hull))}
    on_ring = set(hull)
    cand = np.array([i for i in range(m) if i not in on_ring], dtype=np.int64)

    def edge_len(a: int, b: int) -> float:
        return math.hypot(pts[b, 0] - pts[a, 0], pts[b, 1] - pts[a, 1])

    heap = [(-edge_len(a, b), a, b) for a, b in nxt.items()]
    heapq.heapify(heap)

    while heap and len(cand):
        neg, a, b = heapq.heappop(heap)
        if nxt.get(a) != b:
            continue  # edge replaced since queued
        length = -neg
        if length <= length_threshold:
            continue
        d = kernels.segment_distances(
            np.ascontiguousarray(pts[cand, 0]),
            np.ascontiguousarray(pts[cand, 1]),
            pts[a, 0], pts[a, 1], pts[b, 0], pts[b, 1],
        )
        pick = np.lexsort((cand, d))[0]
        p = int(cand[pick])
        if not d[pick] < length / concavity:
            continue
        ex1, ey1, ex2, ey2 = _edge_arrays(pts, nxt, skip=(a, b))
        if kernels.segment_blocked(pts[a, 0], pts[a, 1], pts[p, 0], pts[p, 1], ex1, ey1, ex2, ey2, 0.0):
            continue
        if kernels.segment_blocked(pts[p, 0], pts[p, 1], pts[b, 0], pts[b, 1], ex1, ey1, ex2, ey2, 0.0):
            continue
        nxt[a] = p
        nxt[p] = b
        on_ring.add(p)
        cand = np.delete(cand, pick)
        heapq.heappush(heap, (-edge_len(a, p), a, p))
        heapq.heappush(heap, (-edge_len(p, b), p, b))

    seq = [hull[0]]
    v = nxt[hull[0]]
    while v != hull[0]:
        seq.append(v)
        v = nxt[v]
    ring = tuple((float(pts[i, 0]), float(pts[i, 1])) for i in seq)
    if not ring_is_simple(ring):
        log.warning("concave hull self-intersected for a %d-point group; using convex hull", m)
        return Polygon.make([tuple(map(float, pts[i])) for i in hull])
    return Polygon.make(ring)


def build_regions(
    groups,
    concavity: float = DEFAULT_CONCAVITY,
    length_threshold: float = DEFAULT_LENGTH_THRESHOLD,
    min_region_size: int = DEFAULT_MIN_REGION_SIZE,
) -> tuple[list[RegionPolygon], list[int]]:
    """Hull every group; returns (regions, ids of groups left as points)."""
    regions: list[RegionPolygon] = []
    point_groups: list[int] = []
    for gid, group in enumerate(groups):
        result = concave_hull(
            group.positions,
            concavity=concavity,
            length_threshold=length_threshold,
            min_region_size=min_region_size,
        )
        if isinstance(result, Degenerate):
            point_groups.append(gid)
            continue
        regions.append(
            RegionPolygon(
                id=f"r{gid}",
                cluster=group.cluster,
                polygon=result,
                group_id=gid,
                member_count=len(group.members),
            )
        )
    return regions, point_groups
