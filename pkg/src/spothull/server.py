"""Read-only HTTP service over a written artifact directory.

The app snapshots every artifact into memory at construction time, so a
running server is immune to files changing underneath it. Missing artifacts
fail construction, not the first request.
"""
from __future__ import annotations

import json
import mimetypes
from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse, Response

from .errors import ValidationError
from .pipeline import ARTIFACTS

_FALLBACK_PAGE = """<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>spothull</title></head>
<body>
<h1>spothull artifacts</h1>
<ul>
<li><a href="/api/overlay.svg">overlay.svg</a></li>
<li><a href="/api/overlay.geojson">overlay.geojson</a></li>
<li><a href="/api/summary">summary</a></li>
<li><a href="/api/clusters">clusters</a></li>
<li><a href="/api/spots">spot index</a></li>
</ul>
<p>No dashboard bundle is installed in this artifact directory.</p>
</body>
</html>
"""


def _load_artifacts(artifact_dir: str) -> dict:
    root = Path(artifact_dir)
    if not root.is_dir():
        raise ValidationError(f"artifact directory {artifact_dir!r} does not exist")
    missing = [name for name in ARTIFACTS if not (root / name).is_file()]
    if missing:
        raise ValidationError(
            f"artifact directory {artifact_dir!r} is missing {', '.join(missing)}"
        )
    data = {name: (root / name).read_bytes() for name in ARTIFACTS}
    snapshot = {
        "svg": data["overlay.svg"],
        "geojson": data["overlay.geojson"],
        "summary": json.loads(data["summary.json"]),
        "report": json.loads(data["report.json"]),
        "spots": json.loads(data["spots.json"]),
    }

    snapshot["image"] = None
    image_name = None
    for candidate in sorted(root.iterdir()):
        if candidate.name in ARTIFACTS or not candidate.is_file():
            continue
        kind, _ = mimetypes.guess_type(candidate.name)
        if kind is not None and kind.startswith("image/") and candidate.suffix != ".svg":
            snapshot["image"] = (candidate.read_bytes(), kind)
            image_name = candidate.name
            break
    snapshot["image_name"] = image_name

    bundle = root / "dashboard"
    snapshot["bundle"] = bundle if bundle.is_dir() else None
    return snapshot


def create_app(artifact_dir: str) -> FastAPI:
    snap = _load_artifacts(artifact_dir)
    app = FastAPI(title="spothull", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    spot_map = snap["spots"]["spots"]
    spot_ids = list(spot_map)
    # position/status slice per spot: lets a client draw hit-test markers
    # without fetching every record individually
    spot_markers = [
        {
            "id": rec["id"],
            "x": rec["x"],
            "y": rec["y"],
            "cluster": rec["cluster"],
            "status": rec["status"],
        }
        for rec in spot_map.values()
    ]

    @app.get("/api/overlay.svg")
    def overlay_svg():
        return Response(content=snap["svg"], media_type="image/svg+xml")

    @app.get("/api/overlay.geojson")
    def overlay_geojson():
        return Response(content=snap["geojson"], media_type="application/geo+json")

    @app.get("/api/summary")
    def summary():
        return JSONResponse(snap["summary"])

    @app.get("/api/report")
    def report():
        return JSONResponse(snap["report"])

    @app.get("/api/clusters")
    def clusters():
        return JSONResponse(snap["summary"]["clusters"])

    @app.get("/api/spots")
    def spot_index():
        return JSONResponse(
            {
                "cell_types": snap["spots"]["cell_types"],
                "ids": spot_ids,
                "markers": spot_markers,
            }
        )

    @app.get("/api/spots/{spot_id}")
    def spot_detail(spot_id: str):
        rec = spot_map.get(spot_id)
        if rec is None:
            return JSONResponse({"error": "unknown spot id", "id": spot_id}, status_code=404)
        return JSONResponse(rec)

    @app.get("/api/image")
    def image():
        if snap["image"] is None:
            return JSONResponse({"error": "no image in this artifact set"}, status_code=404)
        data, kind = snap["image"]
        return Response(content=data, media_type=kind)

    @app.get("/")
    def index():
        bundle = snap["bundle"]
        if bundle is not None and (bundle / "index.html").is_file():
            return HTMLResponse((bundle / "index.html").read_text(encoding="utf-8"))
        return HTMLResponse(_FALLBACK_PAGE)

    if snap["bundle"] is not None:
        from fastapi.staticfiles import StaticFiles

        # bundler output keeps hashed files in an assets/ subdir; flat
        # bundles are served from the bundle root
        sub = snap["bundle"] / "assets"
        root = sub if sub.is_dir() else snap["bundle"]
        app.mount("/assets", StaticFiles(directory=str(root)), name="assets")

    return app
