"""Seeded k-means over proportion vectors plus a 2-D centroid embedding.

Lloyd's algorithm with k-means++ initialization, restarted `restarts` times
(seeds seed, seed+1, ...); the minimum-inertia run wins, ties going to the
lowest restart index. The embedding is PCA via covariance eigendecomposition
with a fixed sign convention, so results are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SpothullError, ValidationError

DEFAULT_K = 8
DEFAULT_RESTARTS = 10
DEFAULT_MAX_ITER = 300
DEFAULT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ClusterModel:
    k: int
    seed: int
    labels: np.ndarray      # (n,) int64 in [0, k)
    centroids: np.ndarray   # (k, T) member means
    inertia: float
    embedding: np.ndarray   # (k, 2)

    def member_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def _kpp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; pure numpy so the draw sequence is backend-free."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[int(rng.integers(n))]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        # k <= distinct vectors guarantees some point is off every center
        probs = d2 / total
        centers[c] = X[int(rng.choice(n, p=probs))]
        d2 = np.minimum(d2, ((X - centers[c]) ** 2).sum(axis=1))
    return centers


def _repair_empty(C: np.ndarray, X: np.ndarray, sqd: np.ndarray, empty: np.ndarray) -> np.ndarray:
    """Move each empty centroid onto the point currently farthest from its own."""
    C = C.copy()
    pool = sqd.copy()
    for e in empty:
        i = int(np.argmax(pool))
        C[e] = X[i]
        pool[i] = -1.0
    return C


def _lloyd(X: np.ndarray, k: int, seed: int, max_iter: int, tol: float):
    rng = np.random.Generator(np.random.PCG64(seed))
    C = _kpp_init(X, k, rng)
    prev = np.inf
    for _ in range(max_iter):
        labels, sqd = kernels.assign_labels(X, C)
        inertia = float(sqd.sum())
        sums, counts = kernels.centroid_sums(X, labels, k)
        empty = np.flatnonzero(counts == 0)
        if len(empty):
            filled = counts > 0
            C_next = C.copy()
            C_next[filled] = sums[filled] / counts[filled, None]
            C = _repair_empty(C_next, X, sqd, empty)
            prev = inertia
            continue
        C_next = sums / counts[:, None]
        if prev - inertia < tol * prev:
            break
        if np.array_equal(C_next, C):
            break
        C = C_next
        prev = inertia
    return _finalize(X, C, k)


def _finalize(X: np.ndarray, C: np.ndarray, k: int):
    """One assignment + mean update, repairing until no cluster is empty."""
    for _ in range(k + 2):
        labels, sqd = kernels.assign_labels(X, C)
        sums, counts = kernels.centroid_sums(X, labels, k)
        empty = np.flatnonzero(counts == 0)
        if len(empty) == 0:
            centroids = sums / counts[:, None]
            inertia = float(((X - centroids[labels]) ** 2).sum())
            return labels, centroids, inertia
        C = _repair_empty(C, X, sqd, empty)
    raise SpothullError("empty-cluster repair did not converge")


def kmeans(
    vectors,
    k: int,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> ClusterModel:
    X = np.ascontiguousarray(np.asarray(vectors, dtype=np.float64))
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValidationError("expected a nonempty 2-D array of vectors")
    if k <= 0:
        raise ValidationError(f"k must be positive, got {k}")
    distinct = len(np.unique(X, axis=0))
    if k > distinct:
        raise ValidationError(f"k={k} exceeds the {distinct} distinct vectors")
    if restarts < 1:
        raise ValidationError(f"restarts must be >= 1, got {restarts}")

    best = None
    for r in range(restarts):
        labels, centroids, inertia = _lloyd(X, k, seed + r, max_iter, tol)
        if best is None or inertia < best[0]:
            best = (inertia, labels, centroids)
    inertia, labels, centroids = best
    return ClusterModel(
        k=k,
        seed=seed,
        labels=labels,
        centroids=centroids,
        inertia=inertia,
        embedding=embed_centroids(centroids),
    )


def assign_label(v, centroids) -> int:
    C = np.ascontiguousarray(np.asarray(centroids, dtype=np.float64))
    x = np.asarray(v, dtype=np.float64).reshape(1, -1)
    if C.ndim != 2 or C.shape[0] == 0:
        raise ValidationError("centroids must be a nonempty 2-D array")
    if x.shape[1] != C.shape[1]:
        raise ValidationError(
            f"vector dimension {x.shape[1]} does not match centroid dimension {C.shape[1]}"
        )
    labels, _ = kernels.assign_labels(np.ascontiguousarray(x), C)
    return int(labels[0])


def embed_centroids(centroids) -> np.ndarray:
    """Project centroids onto their top-2 principal axes; (k, 2) output.

    Missing axes (k <= 2 or T < 2) pad with zeros. Each eigenvector's
    largest-magnitude component is flipped positive so the sign is fixed.
    """
    C = np.asarray(centroids, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] == 0:
        raise ValidationError("centroids must be a nonempty 2-D array")
    k, t = C.shape
    out = np.zeros((k, 2), dtype=np.float64)
    if k == 1:
        return out
    Xc = C - C.mean(axis=0)
    cov = (Xc.T @ Xc) / k
    _, vecs = np.linalg.eigh(cov)  # eigenvalues ascending
    take = min(2, t)
    for axis in range(take):
        v = vecs[:, t - 1 - axis]
        peak = int(np.argmax(np.abs(v)))
        if v[peak] < 0:
            v = -v
        out[:, axis] = Xc @ v
    return out
