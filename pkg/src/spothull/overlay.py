"""Spot classification against final regions and overlay document output.

Emits three artifact views of one OverlayDocument: a styled SVG (striped
region fills, white outlines, retained points on top), a GeoJSON twin in
image pixel coordinates, and a JSON-ready summary dict. All output is
byte-deterministic: fixed attribute order, fixed key order, quantized
coordinates, no timestamps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .colorspace import ColorAssignment
from .clustering import ClusterModel
from .errors import SpothullError, ValidationError
from .geometry import Polygon, polygon_codes
from .polygon_ops import dataset_eps_area, intersect
from .regions import RegionPolygon

MARKER_SHAPES = ("circle", "square", "triangle", "diamond", "cross", "star")

REASON_UNCOVERED = "uncovered"
REASON_MISPLACED = "misplaced"


@dataclass(frozen=True)
class StyleConfig:
    stripe_angle: float = 45.0
    stripe_width: float = 3.0
    stripe_gap: float = 5.0
    outline_color: str = "#ffffff"
    outline_width: float = 1.0
    point_radius: float = 2.5
    point_rim_width: float = 0.5
    image_opacity: float = 1.0

    def __post_init__(self):
        for name in ("stripe_width", "stripe_gap", "outline_width", "point_radius"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"style field {name} must be positive")


@dataclass(frozen=True)
class DotPlotSpec:
    cluster: int
    series: tuple[tuple[str, float, str], ...]  # (cell type, proportion, shape)
    connector: tuple[tuple[float, float], ...]  # dashed polyline through the dots
    member_count: int


@dataclass(frozen=True)
class RetainedPoint:
    id: str
    x: float
    y: float
    cluster: int
    reason: str


@dataclass(frozen=True)
class OverlayDocument:
    regions: tuple[RegionPolygon, ...]
    colors: tuple[ColorAssignment, ...]  # indexed by cluster
    retained: tuple[RetainedPoint, ...]
    dotplots: tuple[DotPlotSpec, ...]
    style: StyleConfig
    image_ref: str | None
    image_size: tuple[int, int] | None
    config_hash: str
    seed: int


def marker_shape(cell_type_index: int) -> str:
    return MARKER_SHAPES[cell_type_index % len(MARKER_SHAPES)]


def classify_spots(
    regions: list[RegionPolygon],
    spots,
    labels,
    eps_area: float | None = None,
):
    """Split spots into covered and retained per the final region set.

    Returns (covered, retained): covered as (spot index, region id) with the
    first own-cluster region covering the spot; retained as (spot index,
    reason). Boundary contact counts as covered. Refuses region sets that
    still overlap (callers must resolve exclusivity first).
    """
    pts = np.asarray(spots, dtype=np.float64).reshape(-1, 2)
    lab = np.asarray(labels)
    if len(pts) != len(lab):
        raise ValidationError("spots and labels must have equal length")
    if eps_area is None:
        eps_area = dataset_eps_area(pts)
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            leak = sum(p.area() for p in intersect(regions[i].polygon, regions[j].polygon))
            if leak > eps_area:
                raise SpothullError(
                    f"regions {regions[i].id} and {regions[j].id} still overlap "
                    f"(area {leak}); classify_spots requires exclusive regions"
                )

    n = len(pts)
    own_region = np.full(n, -1, dtype=np.int64)
    any_cover = np.zeros(n, dtype=bool)
    for ridx, region in enumerate(regions):
        inside = polygon_codes(pts, region.polygon) != 0
        any_cover |= inside
        match = inside & (lab == region.cluster) & (own_region < 0)
        own_region[match] = ridx

    covered = []
    retained = []
    for i in range(n):
        if own_region[i] >= 0:
            covered.append((i, regions[own_region[i]].id))
        elif any_cover[i]:
            retained.append((i, REASON_MISPLACED))
        else:
            retained.append((i, REASON_UNCOVERED))
    return covered, retained


def build_dotplots(model: ClusterModel, cell_types) -> list[DotPlotSpec]:
    """One spec per cluster; shape depends on the cell type alone."""
    names = tuple(str(t) for t in cell_types)
    if model.centroids.shape[1] != len(names):
        raise ValidationError(
            f"{len(names)} cell types do not match centroid dimension {model.centroids.shape[1]}"
        )
    counts = model.member_counts()
    specs = []
    for c in range(model.k):
        series = tuple(
            (names[t], float(model.centroids[c, t]), marker_shape(t))
            for t in range(len(names))
        )
        connector = tuple((float(t), float(model.centroids[c, t])) for t in range(len(names)))
        specs.append(
            DotPlotSpec(cluster=c, series=series, connector=connector, member_count=int(counts[c]))
        )
    return specs


def _fmt(v: float) -> str:
    """Fixed 6-decimal quantization with trailing zeros trimmed."""
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path_d(poly: Polygon) -> str:
    parts = []
    for ring in poly.rings():
        coords = " L ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in ring)
        parts.append(f"M {coords} Z")
    return " ".join(parts)


def _document_bounds(doc: OverlayDocument):
    if doc.image_size is not None:
        return (0.0, 0.0, float(doc.image_size[0]), float(doc.image_size[1]))
    xs: list[float] = []
    ys: list[float] = []
    for region in doc.regions:
        for x, y in region.polygon.exterior:
            xs.append(x)
            ys.append(y)
    for p in doc.retained:
        xs.append(p.x)
        ys.append(p.y)
    if not xs:
        return (0.0, 0.0, 1.0, 1.0)
    pad = doc.style.point_radius + doc.style.outline_width + 8.0
    x0 = math.floor(min(xs) - pad)
    y0 = math.floor(min(ys) - pad)
    x1 = math.ceil(max(xs) + pad)
    y1 = math.ceil(max(ys) + pad)
    return (float(x0), float(y0), float(x1 - x0), float(y1 - y0))


def render_svg(doc: OverlayDocument) -> str:
    """Styled overlay: image, striped regions, retained points, in that order."""
    if doc.image_ref is not None and doc.image_size is None:
        raise ValidationError("image_size is required when image_ref is set")
    style = doc.style
    x0, y0, w, h = _document_bounds(doc)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}" '
        f'width="{_fmt(w)}" height="{_fmt(h)}">'
    ]

    used_clusters = sorted({r.cluster for r in doc.regions})
    period = style.stripe_width + style.stripe_gap
    if used_clusters:
        out.append("<defs>")
        for c in used_clusters:
            color = doc.colors[c].hex
            out.append(
                f'<pattern id="stripes-{c}" patternUnits="userSpaceOnUse" '
                f'width="{_fmt(period)}" height="{_fmt(period)}" '
                f'patternTransform="rotate({_fmt(style.stripe_angle)})">'
                f'<rect width="{_fmt(style.stripe_width)}" height="{_fmt(period)}" fill="{color}"/>'
                f"</pattern>"
            )
        out.append("</defs>")

    out.append('<g id="image-layer">')
    if doc.image_ref is not None:
        iw, ih = doc.image_size
        out.append(
            f'<image href="{doc.image_ref}" x="0" y="0" width="{_fmt(float(iw))}" '
            f'height="{_fmt(float(ih))}" opacity="{_fmt(style.image_opacity)}" '
            'preserveAspectRatio="none"/>'
        )
    out.append("</g>")

    out.append('<g id="region-layer">')
    for region in doc.regions:
        out.append(
            f'<path id="{region.id}" d="{_path_d(region.polygon)}" '
            f'fill="url(#stripes-{region.cluster})" fill-rule="evenodd" '
            f'stroke="{style.outline_color}" stroke-width="{_fmt(style.outline_width)}" '
            'stroke-linejoin="round"/>'
        )
    out.append("</g>")

    out.append('<g id="point-layer">')
    for p in doc.retained:
        out.append(
            f'<circle cx="{_fmt(p.x)}" cy="{_fmt(p.y)}" r="{_fmt(style.point_radius)}" '
            f'fill="{doc.colors[p.cluster].hex}" stroke="#ffffff" '
            f'stroke-width="{_fmt(style.point_rim_width)}" data-spot="{p.id}" '
            f'data-reason="{p.reason}"/>'
        )
    out.append("</g>")
    out.append("</svg>\n")
    return "\n".join(out)


def _geojson_ring(ring, reverse: bool) -> list[list[float]]:
    pts = list(ring[::-1] if reverse else ring)
    pts.append(pts[0])
    return [[float(x), float(y)] for x, y in pts]


def export_geojson(doc: OverlayDocument) -> dict:
    """FeatureCollection dict in image pixel coordinates.

    Exterior rings are clockwise in pixel (y-down) space, which reads as
    the conventional right-hand rule once the declared y flip is applied.
    """
    features = []
    for region in doc.regions:
        rings = [_geojson_ring(region.polygon.exterior, reverse=True)]
        for hole in region.polygon.holes:
            rings.append(_geojson_ring(hole, reverse=True))
        features.append(
            {
                "type": "Feature",
                "id": region.id,
                "geometry": {"type": "Polygon", "coordinates": rings},
                "properties": {
                    "kind": "region",
                    "cluster": region.cluster,
                    "color": doc.colors[region.cluster].hex,
                    "member_count": region.member_count,
                    "group": region.group_id,
                },
            }
        )
    for p in doc.retained:
        features.append(
            {
                "type": "Feature",
                "id": f"spot:{p.id}",
                "geometry": {"type": "Point", "coordinates": [p.x, p.y]},
                "properties": {
                    "kind": "retained",
                    "spot": p.id,
                    "cluster": p.cluster,
                    "color": doc.colors[p.cluster].hex,
                    "reason": p.reason,
                },
            }
        )
    return {
        "type": "FeatureCollection",
        "metadata": {
            "coordinate_space": "image",
            "units": "pixels",
            "y_axis": "down",
            "ring_orientation": "exterior clockwise in pixel space (right-hand rule after y flip)",
            "config_hash": doc.config_hash,
            "seed": doc.seed,
        },
        "features": features,
    }


def build_summary(doc: OverlayDocument, config: dict) -> dict:
    """The JSON summary: clusters, regions, retained points, and config."""
    clusters = []
    for spec in doc.dotplots:
        color = doc.colors[spec.cluster]
        clusters.append(
            {
                "cluster": spec.cluster,
                "hex": color.hex,
                "okhsl": {"h": color.okhsl.h, "s": color.okhsl.s, "l": color.okhsl.l},
                "srgb": list(color.srgb),
                "member_count": spec.member_count,
                "dotplot": {
                    "series": [
                        {"cell_type": name, "proportion": prop, "shape": shape}
                        for name, prop, shape in spec.series
                    ],
                    "connector": [[x, y] for x, y in spec.connector],
                },
            }
        )
    regions = [
        {
            "id": r.id,
            "cluster": r.cluster,
            "group": r.group_id,
            "member_count": r.member_count,
            "area": r.polygon.area(),
            "holes": len(r.polygon.holes),
        }
        for r in doc.regions
    ]
    retained = [
        {"id": p.id, "x": p.x, "y": p.y, "cluster": p.cluster, "reason": p.reason}
        for p in doc.retained
    ]
    return {
        "clusters": clusters,
        "regions": regions,
        "retained": retained,
        "config": config,
    }
