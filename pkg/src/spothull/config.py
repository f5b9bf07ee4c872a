"""Pipeline configuration: defaults, file loading, canonical form, hashing.

Config files are JSON with a schema-version header; command-line flags
override file values. The provenance hash covers only parameters that
change computed results, so re-pointing input or output paths keeps the
same hash.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass

from .clustering import DEFAULT_K, DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_TOL
from .errors import ParseError, ValidationError
from .model import DEFAULT_SIMPLEX_TOL
from .overlay import StyleConfig
from .regions import (
    DEFAULT_CONCAVITY,
    DEFAULT_MIN_REGION_SIZE,
    DEFAULT_RADIUS_FACTOR,
    DEFAULT_LENGTH_THRESHOLD,
)

CONFIG_SCHEMA = "spothull-config/1"

_STYLE_FIELDS = tuple(f.name for f in dataclasses.fields(StyleConfig))


@dataclass(frozen=True)
class PipelineConfig:
    input: str
    format: str = "csv"
    out: str = "out"
    image: str | None = None
    image_width: int | None = None
    image_height: int | None = None
    k: int = DEFAULT_K
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    simplex_tol: float = DEFAULT_SIMPLEX_TOL
    radius_factor: float = DEFAULT_RADIUS_FACTOR
    concavity: float = DEFAULT_CONCAVITY
    length_threshold: float = DEFAULT_LENGTH_THRESHOLD
    min_region_size: int = DEFAULT_MIN_REGION_SIZE
    style: StyleConfig = StyleConfig()

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValidationError(f"unknown input format {self.format!r}")
        if (self.image_width is None) != (self.image_height is None):
            raise ValidationError("image_width and image_height must be given together")


def _jsonable(v: float):
    """Infinity is not valid JSON; it travels as the string 'inf'."""
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def params_dict(cfg: PipelineConfig) -> dict:
    """Computation-relevant parameters in canonical key order."""
    return {
        "schema": CONFIG_SCHEMA,
        "k": cfg.k,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "max_iter": cfg.max_iter,
        "tol": cfg.tol,
        "simplex_tol": cfg.simplex_tol,
        "radius_factor": cfg.radius_factor,
        "concavity": _jsonable(cfg.concavity),
        "length_threshold": cfg.length_threshold,
        "min_region_size": cfg.min_region_size,
        "style": {name: getattr(cfg.style, name) for name in _STYLE_FIELDS},
    }


def config_hash(cfg: PipelineConfig) -> str:
    canon = json.dumps(params_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


_SCALAR_KEYS = {
    "input": str,
    "format": str,
    "out": str,
    "image": str,
    "image_width": int,
    "image_height": int,
    "k": int,
    "seed": int,
    "restarts": int,
    "max_iter": int,
    "tol": float,
    "simplex_tol": float,
    "radius_factor": float,
    "concavity": float,
    "length_threshold": float,
    "min_region_size": int,
}


def _coerce(key: str, value, kind):
    if value is None:
        return None
    try:
        if kind is float and isinstance(value, str):
            return float(value)  # accepts "inf"
        return kind(value)
    except (TypeError, ValueError):
        raise ValidationError(f"config key {key!r}: cannot read {value!r}") from None


def load_config_file(path: str) -> dict:
    """Read a config file into a flat kwargs dict (no defaults applied)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file {path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or obj.get("schema") != CONFIG_SCHEMA:
        raise ParseError(f"config file {path}: missing or unsupported schema header")
    out: dict = {}
    for key, value in obj.items():
        if key == "schema":
            continue
        if key == "style":
            if not isinstance(value, dict) or not set(value) <= set(_STYLE_FIELDS):
                raise ValidationError(f"config key 'style': unknown style fields in {value!r}")
            out["style"] = value
        elif key in _SCALAR_KEYS:
            out[key] = _coerce(key, value, _SCALAR_KEYS[key])
        else:
            raise ValidationError(f"unknown config key {key!r}")
    return out


def build_config(file_values: dict | None = None, **overrides) -> PipelineConfig:
    """Merge file values with overrides (overrides win, None means unset)."""
    merged: dict = dict(file_values or {})
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    style_kwargs = merged.pop("style", None)
    if isinstance(style_kwargs, dict):
        merged["style"] = StyleConfig(**style_kwargs)
    if "input" not in merged:
        raise ValidationError("config requires an input path")
    unknown = set(merged) - {f.name for f in dataclasses.fields(PipelineConfig)}
    if unknown:
        raise ValidationError(f"unknown config keys {sorted(unknown)}")
    return PipelineConfig(**merged)
