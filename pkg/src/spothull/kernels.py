"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Backend selection: the ``SPOTHULL_NUMBA`` environment variable picks the
path at import time. ``0/off/false/no`` forces the numpy fallback,
``1/on/true/yes`` requires numba (import error becomes fatal), anything
else auto-detects. Both paths implement identical semantics; see
``tests/test_kernels.py`` for the parity suite and
``benchmarks/bench_kernels.py`` for timings.
"""
from __future__ import annotations

import os

import numpy as np


def _resolve_backend() -> bool:
    raw = os.environ.get("SPOTHULL_NUMBA", "").strip().lower()
    if raw in ("0", "off", "false", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        if raw in ("1", "on", "true", "yes"):
            raise RuntimeError("SPOTHULL_NUMBA requests numba but it is not importable")
        return False
    return True


USE_NUMBA = _resolve_backend()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# k-means inner loops
# ---------------------------------------------------------------------------

def _assign_labels_loop(X, C):
    n = X.shape[0]
    k = C.shape[0]
    t = X.shape[1]
    labels = np.empty(n, dtype=np.int64)
    sqdists = np.empty(n, dtype=np.float64)
    for i in range(n):
        best = 0
        best_d = np.inf
        for j in range(k):
            d = 0.0
            for c in range(t):
                diff = X[i, c] - C[j, c]
                d += diff * diff
            if d < best_d:  # strict: ties keep the lowest cluster index
                best_d = d
                best = j
        labels[i] = best
        sqdists[i] = best_d
    return labels, sqdists


def _assign_labels_np(X, C):
    d = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d, axis=1).astype(np.int64)
    return labels, d[np.arange(X.shape[0]), labels]


def _centroid_sums_loop(X, labels, k):
    t = X.shape[1]
    sums = np.zeros((k, t), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    for i in range(X.shape[0]):
        lab = labels[i]
        counts[lab] += 1
        for c in range(t):
            sums[lab, c] += X[i, c]
    return sums, counts


def _centroid_sums_np(X, labels, k):
    sums = np.zeros((k, X.shape[1]), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    np.add.at(sums, labels, X)
    np.add.at(counts, labels, 1)
    return sums, counts


# ---------------------------------------------------------------------------
# point-to-segment distances
# ---------------------------------------------------------------------------

def _segment_distances_loop(px, py, ax, ay, bx, by):
    n = px.shape[0]
    out = np.empty(n, dtype=np.float64)
    ux = bx - ax
    uy = by - ay
    denom = ux * ux + uy * uy
    for i in range(n):
        wx = px[i] - ax
        wy = py[i] - ay
        if denom > 0.0:
            s = (wx * ux + wy * uy) / denom
            if s < 0.0:
                s = 0.0
            elif s > 1.0:
                s = 1.0
        else:
            s = 0.0
        dx = wx - s * ux
        dy = wy - s * uy
        out[i] = np.sqrt(dx * dx + dy * dy)
    return out


def _segment_distances_np(px, py, ax, ay, bx, by):
    ux = bx - ax
    uy = by - ay
    denom = ux * ux + uy * uy
    wx = px - ax
    wy = py - ay
    if denom > 0.0:
        s = np.clip((wx * ux + wy * uy) / denom, 0.0, 1.0)
    else:
        s = np.zeros_like(wx)
    dx = wx - s * ux
    dy = wy - s * uy
    return np.sqrt(dx * dx + dy * dy)


# ---------------------------------------------------------------------------
# point-in-ring classification (even-odd ray casting + boundary band)
# ---------------------------------------------------------------------------
# Codes: 0 outside, 1 inside (odd parity), 2 within eps of an edge.

def _ring_codes_loop(px, py, rx, ry, eps):
    n = px.shape[0]
    m = rx.shape[0]
    out = np.zeros(n, dtype=np.int8)
    for i in range(n):
        x = px[i]
        y = py[i]
        inside = False
        on_edge = False
        x1 = rx[m - 1]
        y1 = ry[m - 1]
        for j in range(m):
            x2 = rx[j]
            y2 = ry[j]
            ux = x2 - x1
            uy = y2 - y1
            denom = ux * ux + uy * uy
            wx = x - x1
            wy = y - y1
            if denom > 0.0:
                s = (wx * ux + wy * uy) / denom
                if s < 0.0:
                    s = 0.0
                elif s > 1.0:
                    s = 1.0
            else:
                s = 0.0
            dx = wx - s * ux
            dy = wy - s * uy
            if dx * dx + dy * dy <= eps * eps:
                on_edge = True
                break
            if (y1 > y) != (y2 > y):
                xcross = x1 + (y - y1) / (y2 - y1) * (x2 - x1)
                if x < xcross:
                    inside = not inside
            x1 = x2
            y1 = y2
        if on_edge:
            out[i] = 2
        elif inside:
            out[i] = 1
    return out


def _ring_codes_np(px, py, rx, ry, eps):
    x1 = np.roll(rx, 1)
    y1 = np.roll(ry, 1)
    ux = rx - x1
    uy = ry - y1
    denom = ux * ux + uy * uy
    wx = px[:, None] - x1[None, :]
    wy = py[:, None] - y1[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 0.0, (wx * ux + wy * uy) / np.where(denom > 0.0, denom, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    dx = wx - s * ux
    dy = wy - s * uy
    on_edge = ((dx * dx + dy * dy) <= eps * eps).any(axis=1)

    y2 = ry[None, :]
    y1b = y1[None, :]
    straddle = (y1b > py[:, None]) != (y2 > py[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = x1[None, :] + (py[:, None] - y1b) / np.where(straddle, ry[None, :] - y1b, 1.0) * ux
    crossing = straddle & (px[:, None] < xcross)
    inside = (crossing.sum(axis=1) % 2).astype(bool)

    out = np.zeros(px.shape[0], dtype=np.int8)
    out[inside] = 1
    out[on_edge] = 2
    return out


# ---------------------------------------------------------------------------
# segment conflict tests (used by hull digging and simplicity checks)
# ---------------------------------------------------------------------------
# Two segments "conflict" when they intersect at any point that is not an
# endpoint shared by both. Touching at a shared endpoint is allowed unless
# the segments overlap collinearly beyond it.

def _segments_conflict_scalar(ax, ay, bx, by, cx, cy, dx, dy, tol):
    s_ac = ax == cx and ay == cy
    s_ad = ax == dx and ay == dy
    s_bc = bx == cx and by == cy
    s_bd = bx == dx and by == dy
    if (s_ac and s_bd) or (s_ad and s_bc):
        return True  # identical or reversed segments overlap fully
    if s_ac or s_ad or s_bc or s_bd:
        if s_ac:
            sx, sy, u1x, u1y, u2x, u2y = ax, ay, bx, by, dx, dy
        elif s_ad:
            sx, sy, u1x, u1y, u2x, u2y = ax, ay, bx, by, cx, cy
        elif s_bc:
            sx, sy, u1x, u1y, u2x, u2y = bx, by, ax, ay, dx, dy
        else:
            sx, sy, u1x, u1y, u2x, u2y = bx, by, ax, ay, cx, cy
        e1x = u1x - sx
        e1y = u1y - sy
        e2x = u2x - sx
        e2y = u2y - sy
        cross = e1x * e2y - e1y * e2x
        dot = e1x * e2x + e1y * e2y
        return abs(cross) <= tol and dot > 0.0
    d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    z1 = abs(d1) <= tol
    z2 = abs(d2) <= tol
    z3 = abs(d3) <= tol
    z4 = abs(d4) <= tol
    if not (z1 or z2 or z3 or z4):
        return ((d1 > 0.0) != (d2 > 0.0)) and ((d3 > 0.0) != (d4 > 0.0))
    # Degenerate: some endpoint is (near-)collinear with the other segment.
    if z1 and _on_segment_scalar(cx, cy, dx, dy, ax, ay):
        return True
    if z2 and _on_segment_scalar(cx, cy, dx, dy, bx, by):
        return True
    if z3 and _on_segment_scalar(ax, ay, bx, by, cx, cy):
        return True
    if z4 and _on_segment_scalar(ax, ay, bx, by, dx, dy):
        return True
    if not (z1 and z2) and not (z3 and z4):
        s12 = ((d1 > tol) and (d2 < -tol)) or ((d1 < -tol) and (d2 > tol))
        s34 = ((d3 > tol) and (d4 < -tol)) or ((d3 < -tol) and (d4 > tol))
        return s12 and s34
    return False


def _on_segment_scalar(ax, ay, bx, by, px_, py_):
    lo_x = ax if ax < bx else bx
    hi_x = ax if ax > bx else bx
    lo_y = ay if ay < by else by
    hi_y = ay if ay > by else by
    return lo_x <= px_ and px_ <= hi_x and lo_y <= py_ and py_ <= hi_y


def _segment_blocked_loop(ax, ay, bx, by, ex1, ey1, ex2, ey2, tol):
    for j in range(ex1.shape[0]):
        if _segments_conflict_scalar(ax, ay, bx, by, ex1[j], ey1[j], ex2[j], ey2[j], tol):
            return True
    return False


def _segment_blocked_np(ax, ay, bx, by, ex1, ey1, ex2, ey2, tol):
    s_ac = (ex1 == ax) & (ey1 == ay)
    s_ad = (ex2 == ax) & (ey2 == ay)
    s_bc = (ex1 == bx) & (ey1 == by)
    s_bd = (ex2 == bx) & (ey2 == by)
    full = (s_ac & s_bd) | (s_ad & s_bc)
    if full.any():
        return True

    shared = s_ac | s_ad | s_bc | s_bd
    if shared.any():
        sx = np.where(s_ac | s_ad, ax, bx)
        sy = np.where(s_ac | s_ad, ay, by)
        u1x = np.where(s_ac | s_ad, bx, ax) - sx
        u1y = np.where(s_ac | s_ad, by, ay) - sy
        u2x = np.where(s_ac | s_bc, ex2, ex1) - sx
        u2y = np.where(s_ac | s_bc, ey2, ey1) - sy
        cross = u1x * u2y - u1y * u2x
        dot = u1x * u2x + u1y * u2y
        if (shared & (np.abs(cross) <= tol) & (dot > 0.0)).any():
            return True

    rest = ~shared
    if not rest.any():
        return False
    c1x, c1y, c2x, c2y = ex1[rest], ey1[rest], ex2[rest], ey2[rest]
    d1 = (c2x - c1x) * (ay - c1y) - (c2y - c1y) * (ax - c1x)
    d2 = (c2x - c1x) * (by - c1y) - (c2y - c1y) * (bx - c1x)
    d3 = (bx - ax) * (c1y - ay) - (by - ay) * (c1x - ax)
    d4 = (bx - ax) * (c2y - ay) - (by - ay) * (c2x - ax)
    z1 = np.abs(d1) <= tol
    z2 = np.abs(d2) <= tol
    z3 = np.abs(d3) <= tol
    z4 = np.abs(d4) <= tol
    clean = ~(z1 | z2 | z3 | z4)
    proper = clean & ((d1 > 0.0) != (d2 > 0.0)) & ((d3 > 0.0) != (d4 > 0.0))
    if proper.any():
        return True

    def on_seg(px_, py_, qx, qy, tx, ty):
        return (
            (np.minimum(px_, qx) <= tx)
            & (tx <= np.maximum(px_, qx))
            & (np.minimum(py_, qy) <= ty)
            & (ty <= np.maximum(py_, qy))
        )

    touch = (
        (z1 & on_seg(c1x, c1y, c2x, c2y, ax, ay))
        | (z2 & on_seg(c1x, c1y, c2x, c2y, bx, by))
        | (z3 & on_seg(ax, ay, bx, by, c1x, c1y))
        | (z4 & on_seg(ax, ay, bx, by, c2x, c2y))
    )
    return bool(touch.any())


if USE_NUMBA:
    from numba import njit

    assign_labels = njit(cache=True)(_assign_labels_loop)
    centroid_sums = njit(cache=True)(_centroid_sums_loop)
    segment_distances = njit(cache=True)(_segment_distances_loop)
    ring_codes = njit(cache=True)(_ring_codes_loop)
    # rebind the globals the conflict test resolves at compile time
    _on_segment_scalar = njit(cache=True)(_on_segment_scalar)
    _segments_conflict_scalar_impl = njit(cache=True)(_segments_conflict_scalar)

    @njit(cache=True)
    def segment_blocked(ax, ay, bx, by, ex1, ey1, ex2, ey2, tol):
        for j in range(ex1.shape[0]):
            if _segments_conflict_scalar_impl(
                ax, ay, bx, by, ex1[j], ey1[j], ex2[j], ey2[j], tol
            ):
                return True
        return False

else:
    assign_labels = _assign_labels_np
    centroid_sums = _centroid_sums_np
    segment_distances = _segment_distances_np
    ring_codes = _ring_codes_np
    segment_blocked = _segment_blocked_np
    _segments_conflict_scalar_impl = _segments_conflict_scalar


def segments_conflict(a, b, c, d, tol=0.0):
    """Scalar segment conflict test on coordinate pairs."""
    return bool(
        _segments_conflict_scalar_impl(
            float(a[0]), float(a[1]), float(b[0]), float(b[1]),
            float(c[0]), float(c[1]), float(d[0]), float(d[1]), float(tol),
        )
    )
