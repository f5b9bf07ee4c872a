"""Region overlays for spatial cell-type composition data.

Clusters per-spot proportion vectors, colors the clusters through a 2D
embedding, traces concave region outlines around same-cluster neighbor
components, makes the regions mutually exclusive, and emits SVG, GeoJSON,
and JSON summary artifacts plus a read-only HTTP view.
"""
from .clustering import ClusterModel, assign_label, embed_centroids, kmeans
from .colorspace import (
    ColorAssignment,
    OkhslColor,
    colors_from_embedding,
    hex_from_srgb,
    okhsl_from_srgb,
    srgb_from_okhsl,
)
from .config import PipelineConfig, build_config, config_hash, load_config_file
from .errors import (
    GeometryError,
    ParseError,
    PipelineError,
    SpothullError,
    ValidationError,
)
from .geometry import Degenerate, Polygon, SpatialIndex, convex_hull, point_in_polygon
from .model import (
    Spot,
    SpotDataset,
    ValidationReport,
    parse_dataset,
    serialize_dataset,
    validate_dataset,
)
from .overlay import (
    DotPlotSpec,
    OverlayDocument,
    RetainedPoint,
    StyleConfig,
    build_dotplots,
    build_summary,
    classify_spots,
    export_geojson,
    render_svg,
)
from .pipeline import PipelineResult, run_pipeline
from .polygon_ops import OverlapRecord, intersect, resolve_overlaps, subtract
from .regions import (
    NeighborGraph,
    RegionPolygon,
    SpotGroup,
    build_neighbor_graph,
    build_regions,
    concave_hull,
    same_label_components,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterModel",
    "ColorAssignment",
    "Degenerate",
    "DotPlotSpec",
    "GeometryError",
    "NeighborGraph",
    "OkhslColor",
    "OverlapRecord",
    "OverlayDocument",
    "ParseError",
    "PipelineConfig",
    "PipelineError",
    "PipelineResult",
    "Polygon",
    "RegionPolygon",
    "RetainedPoint",
    "SpatialIndex",
    "Spot",
    "SpotDataset",
    "SpotGroup",
    "SpothullError",
    "StyleConfig",
    "ValidationError",
    "ValidationReport",
    "assign_label",
    "build_config",
    "build_dotplots",
    "build_neighbor_graph",
    "build_regions",
    "build_summary",
    "classify_spots",
    "colors_from_embedding",
    "concave_hull",
    "config_hash",
    "convex_hull",
    "embed_centroids",
    "export_geojson",
    "hex_from_srgb",
    "intersect",
    "kmeans",
    "load_config_file",
    "okhsl_from_srgb",
    "parse_dataset",
    "point_in_polygon",
    "render_svg",
    "resolve_overlaps",
    "run_pipeline",
    "same_label_components",
    "serialize_dataset",
    "srgb_from_okhsl",
    "subtract",
    "validate_dataset",
]
