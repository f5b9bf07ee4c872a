"""End-to-end run: dataset file in, overlay artifacts out.

Every stage failure is re-raised as PipelineError with the stage name so
callers can report where a run died. Artifact bytes are deterministic for
a fixed (input, config) pair.
"""
from __future__ import annotations

import json
import logging
import shutil
from dataclasses import dataclass
from pathlib import Path

from . import overlay as overlay_mod
from .clustering import ClusterModel, embed_centroids, kmeans
from .colorspace import colors_from_embedding
from .config import PipelineConfig, config_hash, params_dict
from .errors import PipelineError, SpothullError, ValidationError
from .model import SpotDataset, ValidationReport, parse_dataset, validate_dataset
from .overlay import OverlayDocument, RetainedPoint, build_dotplots, classify_spots
from .polygon_ops import OverlapRecord, resolve_overlaps
from .regions import RegionPolygon, build_neighbor_graph, build_regions, same_label_components

log = logging.getLogger("spothull.pipeline")

ARTIFACTS = ("overlay.svg", "overlay.geojson", "summary.json", "report.json", "spots.json")


@dataclass
class PipelineResult:
    document: OverlayDocument
    dataset: SpotDataset
    model: ClusterModel
    regions: list[RegionPolygon]
    overlap_records: list[OverlapRecord]
    validation: ValidationReport
    summary: dict
    files: dict[str, str]


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except SpothullError as exc:
        raise PipelineError(name, exc) from exc


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def _spot_records(dataset, labels, covered, retained) -> dict:
    status: dict[int, tuple[str, str | None, str | None]] = {}
    for idx, region_id in covered:
        status[idx] = ("covered", region_id, None)
    for idx, reason in retained:
        status[idx] = ("retained", None, reason)
    spots = {}
    for i, s in enumerate(dataset.spots):
        kind, region_id, reason = status[i]
        spots[s.id] = {
            "id": s.id,
            "x": s.x,
            "y": s.y,
            "cluster": int(labels[i]),
            "proportions": list(s.proportions),
            "status": kind,
            "region": region_id,
            "reason": reason,
        }
    return {"cell_types": list(dataset.cell_types), "spots": spots}


def build_document(cfg: PipelineConfig, raw: bytes | str):
    """All computation, no filesystem writes. Returns (result pieces)."""
    dataset = _stage("parse", parse_dataset, raw, cfg.format)
    dataset, report = _stage("validate", validate_dataset, dataset, cfg.simplex_tol)
    if len(dataset) == 0:
        raise PipelineError("validate", ValidationError("no valid spots remain after validation"))
    for sid, msg in report.errors:
        log.warning("dropped spot %s: %s", sid, msg)

    model = _stage(
        "cluster",
        kmeans,
        dataset.proportion_matrix(),
        cfg.k,
        seed=cfg.seed,
        restarts=cfg.restarts,
        max_iter=cfg.max_iter,
        tol=cfg.tol,
    )
    embedding = _stage("embed", embed_centroids, model.centroids)
    colors = _stage("color", colors_from_embedding, embedding)

    positions = dataset.positions()
    graph = _stage("graph", build_neighbor_graph, positions, cfg.radius_factor)
    groups = _stage("components", same_label_components, graph, model.labels)
    regions, point_groups = _stage(
        "hulls",
        build_regions,
        groups,
        concavity=cfg.concavity,
        length_threshold=cfg.length_threshold,
        min_region_size=cfg.min_region_size,
    )
    if point_groups:
        log.info("%d groups too sparse for hulls; their spots stay as points", len(point_groups))
    final_regions, records = _stage("exclusivity", resolve_overlaps, regions, positions, model.labels)
    covered, retained = _stage("classify", classify_spots, final_regions, positions, model.labels)
    dotplots = _stage("dotplot", build_dotplots, model, dataset.cell_types)

    image_ref = cfg.image if cfg.image is not None else dataset.image_ref
    image_size = dataset.image_size
    if cfg.image_width is not None and cfg.image_height is not None:
        image_size = (cfg.image_width, cfg.image_height)
    if image_ref is not None and image_size is None:
        raise PipelineError(
            "render",
            ValidationError("an image was given without its pixel size"),
        )

    retained_points = tuple(
        RetainedPoint(
            id=dataset.spots[idx].id,
            x=dataset.spots[idx].x,
            y=dataset.spots[idx].y,
            cluster=int(model.labels[idx]),
            reason=reason,
        )
        for idx, reason in retained
    )
    document = OverlayDocument(
        regions=tuple(final_regions),
        colors=tuple(colors),
        retained=retained_points,
        dotplots=tuple(dotplots),
        style=cfg.style,
        image_ref=Path(image_ref).name if image_ref is not None else None,
        image_size=image_size,
        config_hash=config_hash(cfg),
        seed=cfg.seed,
    )
    return document, dataset, model, final_regions, records, report, covered, retained


def run_pipeline(cfg: PipelineConfig, write: bool = True) -> PipelineResult:
    """Run every stage and (optionally) write the artifact set to cfg.out."""
    try:
        raw = Path(cfg.input).read_bytes()
    except OSError as exc:
        raise PipelineError("parse", ValidationError(f"cannot read input: {exc}")) from exc

    (document, dataset, model, final_regions, records, report, covered, retained) = build_document(
        cfg, raw
    )

    svg = _stage("render", overlay_mod.render_svg, document)
    geojson = _stage("render", overlay_mod.export_geojson, document)
    config_echo = params_dict(cfg)
    config_echo["config_hash"] = document.config_hash
    summary = overlay_mod.build_summary(document, config_echo)
    run_report = {
        "validation": report.to_dict(),
        "overlaps": [
            {
                "a": r.a,
                "b": r.b,
                "area": r.area,
                "count_a": r.count_a,
                "count_b": r.count_b,
                "loser": r.loser,
            }
            for r in records
        ],
        "counts": {
            "spots": len(dataset),
            "clusters": model.k,
            "regions": len(final_regions),
            "covered": len(covered),
            "retained": len(retained),
        },
    }
    spots_obj = _spot_records(dataset, model.labels, covered, retained)

    files: dict[str, str] = {}
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        payloads = {
            "overlay.svg": svg.encode("utf-8"),
            "overlay.geojson": _json_bytes(geojson),
            "summary.json": _json_bytes(summary),
            "report.json": _json_bytes(run_report),
            "spots.json": _json_bytes(spots_obj),
        }
        for name, data in payloads.items():
            path = out / name
            path.write_bytes(data)
            files[name] = str(path)
        source_image = cfg.image if cfg.image is not None else dataset.image_ref
        if source_image is not None and document.image_ref is not None:
            src = Path(source_image)
            if src.is_file():
                dst = out / document.image_ref
                if src.resolve() != dst.resolve():
                    shutil.copyfile(src, dst)
                files["image"] = str(dst)
            else:
                log.warning("image %s not found; overlay references it anyway", source_image)

    return PipelineResult(
        document=document,
        dataset=dataset,
        model=model,
        regions=final_regions,
        overlap_records=records,
        validation=report,
        summary=summary,
        files=files,
    )
