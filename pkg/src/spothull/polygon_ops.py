"""Boolean polygon operations and the mutual-exclusion pass over regions.

Clipping runs on shapely (GEOS), which handles the shared vertices and
coincident edges that hulls built from common spots produce. Results are
re-normalized into local Polygon values with canonical ring order so the
output is deterministic regardless of library-internal ordering.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import shapely

from .errors import PipelineError, ValidationError
from .geometry import Polygon, polygon_codes, signed_area
from .regions import RegionPolygon

EPS_AREA_SCALE = 1e-9  # of the dataset bounding-box area


def _to_shapely(p: Polygon) -> shapely.Polygon:
    return shapely.Polygon(shell=p.exterior, holes=list(p.holes))


def _collect_parts(geom) -> list:
    if geom.is_empty:
        return []
    if geom.geom_type == "Polygon":
        return [geom]
    if geom.geom_type in ("MultiPolygon", "GeometryCollection"):
        parts = []
        for g in geom.geoms:
            parts.extend(_collect_parts(g))
        return parts
    return []  # lines and points carry no area


def _from_shapely(geom, eps_area: float) -> list[Polygon]:
    out = []
    for part in _collect_parts(geom):
        if part.area <= eps_area:
            continue
        exterior = list(part.exterior.coords)[:-1]
        # GEOS sums area in a different order than the shoelace here; a
        # hairline sliver can clear eps yet normalize to exactly zero.
        if len(exterior) < 3 or signed_area(exterior) == 0.0:
            continue
        holes = [list(r.coords)[:-1] for r in part.interiors]
        out.append(Polygon.make(exterior, holes))
    out.sort(key=lambda p: p.exterior[0])
    return out


def intersect(a: Polygon, b: Polygon, eps_area: float = 0.0) -> list[Polygon]:
    """Components of a AND b with area above eps_area."""
    return _from_shapely(shapely.intersection(_to_shapely(a), _to_shapely(b)), eps_area)


def subtract(a: Polygon, b: Polygon, eps_area: float = 0.0) -> list[Polygon]:
    """Components of a MINUS b with area above eps_area."""
    return _from_shapely(shapely.difference(_to_shapely(a), _to_shapely(b)), eps_area)


@dataclass(frozen=True)
class OverlapRecord:
    a: str
    b: str
    area: float
    count_a: int
    count_b: int
    loser: str


def dataset_eps_area(positions) -> float:
    pts = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    if len(pts) == 0:
        return 0.0
    w = float(pts[:, 0].max() - pts[:, 0].min())
    h = float(pts[:, 1].max() - pts[:, 1].min())
    return EPS_AREA_SCALE * w * h


def _covered_count(parts: list[Polygon], pts: np.ndarray, mask: np.ndarray) -> int:
    """How many masked spots fall inside or on any of the parts."""
    if not mask.any():
        return 0
    sel = pts[mask]
    hit = np.zeros(len(sel), dtype=bool)
    for part in parts:
        hit |= polygon_codes(sel, part) != 0
    return int(hit.sum())


def resolve_overlaps(
    regions: list[RegionPolygon],
    spots,
    labels,
    eps_area: float | None = None,
) -> tuple[list[RegionPolygon], list[OverlapRecord]]:
    """Subtract pairwise overlaps until regions are mutually exclusive.

    Pairs are visited in list order (ids were assigned in that order). The
    region with fewer of its own cluster's spots inside the intersection
    loses it; ties go against the smaller area, then against the later id.
    A loser that splits becomes id.0, id.1, ... in canonical part order; a
    loser reduced below eps_area is dropped.
    """
    pts = np.asarray(spots, dtype=np.float64).reshape(-1, 2)
    lab = np.asarray(labels)
    if len(pts) != len(lab):
        raise ValidationError("spots and labels must have equal length")
    if eps_area is None:
        eps_area = dataset_eps_area(pts)

    work = list(regions)
    records: list[OverlapRecord] = []
    n0 = len(work)
    max_events = max(1, 10 * (n0 * (n0 - 1) // 2))
    events = 0

    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                ra, rb = work[i], work[j]
                inter = intersect(ra.polygon, rb.polygon, eps_area=0.0)
                inter_area = sum(p.area() for p in inter)
                if inter_area <= eps_area:
                    continue
                count_a = _covered_count(inter, pts, lab == ra.cluster)
                count_b = _covered_count(inter, pts, lab == rb.cluster)
                if count_a != count_b:
                    loser_at = i if count_a < count_b else j
                elif ra.polygon.area() != rb.polygon.area():
                    loser_at = i if ra.polygon.area() < rb.polygon.area() else j
                else:
                    loser_at = j  # equal counts and areas: later id loses
                winner_at = j if loser_at == i else i
                loser, winner = work[loser_at], work[winner_at]
                records.append(
                    OverlapRecord(
                        a=ra.id, b=rb.id, area=inter_area,
                        count_a=count_a, count_b=count_b, loser=loser.id,
                    )
                )
                parts = subtract(loser.polygon, winner.polygon, eps_area=eps_area)
                if len(parts) == 0:
                    work.pop(loser_at)
                elif len(parts) == 1:
                    work[loser_at] = replace(loser, polygon=parts[0])
                else:
                    pieces = [
                        replace(loser, id=f"{loser.id}.{s}", polygon=part)
                        for s, part in enumerate(parts)
                    ]
                    work[loser_at:loser_at + 1] = pieces
                events += 1
                if events > max_events:
                    raise PipelineError(
                        "resolve_overlaps",
                        f"exceeded {max_events} subtraction events; clipping is not converging",
                    )
                changed = True
                break
            if changed:
                break
    return work, records
