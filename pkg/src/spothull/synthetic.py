"""Seeded synthetic datasets for demos and tests.

Positions sit on hex lattices or jittered blobs; proportion vectors are
Dirichlet draws concentrated on one signature cell type per blob, so a
correct pipeline recovers the blobs as clusters.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .model import Spot, SpotDataset


def hex_grid(rows: int, cols: int, spacing: float = 10.0, origin=(0.0, 0.0)) -> np.ndarray:
    """Row-staggered triangular lattice, (rows*cols, 2), y growing downward."""
    if rows < 1 or cols < 1:
        raise ValidationError("hex_grid needs at least one row and column")
    dy = spacing * np.sqrt(3.0) / 2.0
    pts = np.empty((rows * cols, 2), dtype=np.float64)
    i = 0
    for r in range(rows):
        off = (r % 2) * spacing / 2.0
        for c in range(cols):
            pts[i, 0] = origin[0] + c * spacing + off
            pts[i, 1] = origin[1] + r * dy
            i += 1
    return pts


def _blob_proportions(rng, blob: int, n_types: int, sharpness: float) -> np.ndarray:
    alpha = np.full(n_types, 0.35)
    alpha[blob % n_types] += sharpness + 1.5 * (blob // n_types)
    return rng.dirichlet(alpha)


def four_blob_dataset(
    rows: int = 20,
    cols: int = 25,
    n_types: int = 5,
    spacing: float = 10.0,
    seed: int = 7,
    sharpness: float = 9.0,
) -> tuple[SpotDataset, np.ndarray]:
    """Hex-grid field split into four spatial quadrant blobs.

    Returns (dataset, blob_labels); blob_labels[i] is the generating blob of
    spot i (the recovery ground truth).
    """
    rng = np.random.default_rng(seed)
    pts = hex_grid(rows, cols, spacing)
    w = (cols - 1) * spacing
    h = (rows - 1) * spacing * np.sqrt(3.0) / 2.0
    centers = np.array(
        [
            (0.25 * w, 0.25 * h),
            (0.75 * w, 0.25 * h),
            (0.25 * w, 0.75 * h),
            (0.75 * w, 0.75 * h),
        ]
    )
    d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    blobs = d2.argmin(axis=1)

    spots = []
    for i in range(len(pts)):
        p = _blob_proportions(rng, int(blobs[i]), n_types, sharpness)
        spots.append(
            Spot(f"s{i:04d}", float(pts[i, 0]), float(pts[i, 1]), tuple(float(v) for v in p))
        )
    ds = SpotDataset(tuple(spots), tuple(f"T{t}" for t in range(n_types)))
    return ds, blobs


def random_dataset(
    n_spots: int,
    n_types: int,
    n_blobs: int,
    seed: int,
    field: float = 1000.0,
    sigma: float = 55.0,
    sharpness: float = 8.0,
) -> tuple[SpotDataset, np.ndarray]:
    """Jittered Gaussian position blobs with blob-specific proportion mixes."""
    if n_spots < n_blobs:
        raise ValidationError("need at least one spot per blob")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.15 * field, 0.85 * field, size=(n_blobs, 2))
    blobs = np.concatenate(
        [np.arange(n_blobs), rng.integers(0, n_blobs, size=n_spots - n_blobs)]
    )
    spots = []
    for i in range(n_spots):
        b = int(blobs[i])
        x, y = centers[b] + rng.normal(0.0, sigma, size=2)
        p = _blob_proportions(rng, b, n_types, sharpness)
        spots.append(Spot(f"s{i:04d}", float(x), float(y), tuple(float(v) for v in p)))
    ds = SpotDataset(tuple(spots), tuple(f"T{t}" for t in range(n_types)))
    return ds, blobs
