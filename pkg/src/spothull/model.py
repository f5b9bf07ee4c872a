"""Spot dataset model: parsing, normalization, validation, serialization.

Coordinates are image pixels (x right, y down). Proportion vectors live on
the unit simplex after validation; input row order is the canonical spot
order everywhere downstream.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

DEFAULT_SIMPLEX_TOL = 0.01
_SUM_NOISE = 1e-12  # sums this close to 1 are left untouched (idempotence)


@dataclass(frozen=True)
class Spot:
    id: str
    x: float
    y: float
    proportions: tuple[float, ...]

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class SpotDataset:
    spots: tuple[Spot, ...]
    cell_types: tuple[str, ...]
    image_ref: str | None = None
    image_size: tuple[int, int] | None = None

    def __post_init__(self):
        names = self.cell_types
        if len(set(names)) != len(names) or any(not n for n in names):
            raise ValidationError("cell type names must be unique and nonempty")
        seen = set()
        for s in self.spots:
            if s.id in seen:
                raise ValidationError(f"duplicate spot id {s.id!r}")
            seen.add(s.id)
            if len(s.proportions) != len(names):
                raise ValidationError(
                    f"spot {s.id!r}: expected {len(names)} proportions, got {len(s.proportions)}"
                )

    def __len__(self) -> int:
        return len(self.spots)

    def positions(self) -> np.ndarray:
        return np.array([(s.x, s.y) for s in self.spots], dtype=np.float64).reshape(-1, 2)

    def proportion_matrix(self) -> np.ndarray:
        return np.array([s.proportions for s in self.spots], dtype=np.float64).reshape(
            len(self.spots), len(self.cell_types)
        )

    def bounding_box(self) -> tuple[float, float, float, float]:
        pos = self.positions()
        if len(pos) == 0:
            return (0.0, 0.0, 0.0, 0.0)
        return (
            float(pos[:, 0].min()),
            float(pos[:, 1].min()),
            float(pos[:, 0].max()),
            float(pos[:, 1].max()),
        )


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)
    normalized_count: int = 0

    @property
    def accepted(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {
            "errors": [{"spot_id": i, "message": m} for i, m in self.errors],
            "warnings": [{"spot_id": i, "message": m} for i, m in self.warnings],
            "normalized_count": self.normalized_count,
        }


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_CSV_FIXED = ("spot_id", "x", "y")


def parse_dataset(raw: bytes | str, format: str) -> SpotDataset:
    """Parse a CSV or JSON byte stream into an (unnormalized) SpotDataset."""
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    if format == "csv":
        return _parse_csv(raw)
    if format == "json":
        return _parse_json(raw)
    raise ParseError(f"unknown format {format!r} (expected 'csv' or 'json')")


def _parse_csv(text: str) -> SpotDataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty CSV input") from None
    header = [h.strip() for h in header]
    if tuple(header[:3]) != _CSV_FIXED:
        raise ParseError(
            f"malformed header: expected columns {','.join(_CSV_FIXED)},<types...>, got {','.join(header)}"
        )
    cell_types = tuple(header[3:])
    if not cell_types:
        raise ParseError("missing cell-type columns (need at least one after spot_id,x,y)")

    spots: list[Spot] = []
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise ParseError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        sid = row[0].strip()
        if not sid:
            raise ParseError(f"row {lineno}: empty spot_id")
        if sid in seen:
            raise ParseError(f"row {lineno}: duplicate spot id {sid!r}")
        seen.add(sid)
        values = []
        for col, cell in zip(header[1:], row[1:]):
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(
                    f"row {lineno}, column {col!r}: non-numeric value {cell!r}"
                ) from None
        spots.append(Spot(sid, values[0], values[1], tuple(values[2:])))
    return SpotDataset(tuple(spots), cell_types)


def _parse_json(text: str) -> SpotDataset:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "cell_types" not in obj or "spots" not in obj:
        raise ParseError("JSON dataset must be an object with 'cell_types' and 'spots'")
    cell_types = tuple(str(t) for t in obj["cell_types"])

    image_ref = None
    image_size = None
    image = obj.get("image")
    if image is not None:
        if not isinstance(image, dict) or "path" not in image:
            raise ParseError("'image' must be an object with at least 'path'")
        image_ref = str(image["path"])
        if "width" in image and "height" in image:
            image_size = (int(image["width"]), int(image["height"]))

    spots: list[Spot] = []
    seen: set[str] = set()
    for i, rec in enumerate(obj["spots"]):
        where = f"spots[{i}]"
        for key in ("id", "x", "y", "p"):
            if key not in rec:
                raise ParseError(f"{where}: missing field {key!r}")
        sid = str(rec["id"])
        if sid in seen:
            raise ParseError(f"{where}: duplicate spot id {sid!r}")
        seen.add(sid)
        try:
            x = float(rec["x"])
            y = float(rec["y"])
            p = tuple(float(v) for v in rec["p"])
        except (TypeError, ValueError):
            raise ParseError(f"{where}: non-numeric coordinate or proportion") from None
        if len(p) != len(cell_types):
            raise ParseError(
                f"{where}: expected {len(cell_types)} proportions, got {len(p)}"
            )
        spots.append(Spot(sid, x, y, p))
    return SpotDataset(tuple(spots), cell_types, image_ref, image_size)


# ---------------------------------------------------------------------------
# serialization (round-trips with parse_dataset)
# ---------------------------------------------------------------------------

def serialize_dataset(d: SpotDataset, format: str) -> str:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(_CSV_FIXED) + list(d.cell_types))
        for s in d.spots:
            writer.writerow([s.id, repr(s.x), repr(s.y)] + [repr(v) for v in s.proportions])
        return buf.getvalue()
    if format == "json":
        obj: dict = {"cell_types": list(d.cell_types)}
        if d.image_ref is not None:
            image: dict = {"path": d.image_ref}
            if d.image_size is not None:
                image["width"], image["height"] = d.image_size
            obj["image"] = image
        obj["spots"] = [
            {"id": s.id, "x": s.x, "y": s.y, "p": list(s.proportions)} for s in d.spots
        ]
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))
    raise ParseError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# normalization & validation
# ---------------------------------------------------------------------------

def normalize_proportions(
    v: tuple[float, ...] | list[float], tol: float = DEFAULT_SIMPLEX_TOL
) -> tuple[tuple[float, ...], bool, bool]:
    """Project a nonnegative vector onto the unit simplex.

    Returns (normalized, renormalized, warn): ``renormalized`` when the sum
    differed from 1 beyond float noise, ``warn`` when it differed beyond
    ``tol``. Negative entries, non-finite entries, and zero sums are hard
    errors; we reject rather than clamp to avoid inventing data.
    """
    vals = [float(x) for x in v]
    for x in vals:
        if math.isnan(x) or math.isinf(x):
            raise ValidationError("non-finite proportion")
        if x < 0:
            raise ValidationError(f"negative proportion {x}")
    total = math.fsum(vals)
    if total <= 0:
        raise ValidationError("proportions sum to zero")
    if abs(total - 1.0) <= _SUM_NOISE:
        return tuple(vals), False, False
    return tuple(x / total for x in vals), True, abs(total - 1.0) > tol


def validate_dataset(
    d: SpotDataset, tol: float = DEFAULT_SIMPLEX_TOL
) -> tuple[SpotDataset, ValidationReport]:
    """Normalize every spot, drop irreparable ones, and report repairs."""
    report = ValidationReport()
    kept: list[Spot] = []
    for s in d.spots:
        if not (math.isfinite(s.x) and math.isfinite(s.y)):
            report.errors.append((s.id, "non-finite position"))
            continue
        try:
            p, renorm, warn = normalize_proportions(s.proportions, tol)
        except ValidationError as exc:
            report.errors.append((s.id, str(exc)))
            continue
        if renorm:
            report.normalized_count += 1
        if warn:
            report.warnings.append(
                (s.id, f"proportions summed to {math.fsum(s.proportions):.6g}; renormalized")
            )
        kept.append(Spot(s.id, s.x, s.y, p))
    return (
        SpotDataset(tuple(kept), d.cell_types, d.image_ref, d.image_size),
        report,
    )
