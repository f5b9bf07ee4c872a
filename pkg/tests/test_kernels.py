"""Parity between the numba loop kernels and the numpy fallbacks.

Both implementations of every kernel are importable regardless of which
backend the package selected, so parity runs in-process. A subprocess test
additionally pins artifact determinism under each backend flag.
"""
import os
import subprocess
import sys

import numpy as np
import pytest

from spothull import kernels

HAVE_NUMBA = True
try:
    import numba  # noqa: F401
except ImportError:
    HAVE_NUMBA = False

rng = np.random.default_rng(42)


def _pairs(n):
    return rng.uniform(-5, 5, size=(n, 2))


def test_backend_reports_a_name():
    assert kernels.backend() in ("numba", "numpy")


def test_assign_labels_parity():
    for _ in range(20):
        X = rng.uniform(0, 1, size=(rng.integers(1, 60), rng.integers(1, 6)))
        C = rng.uniform(0, 1, size=(rng.integers(1, 7), X.shape[1]))
        l1, d1 = kernels._assign_labels_loop(X, C)
        l2, d2 = kernels._assign_labels_np(X, C)
        assert np.array_equal(l1, l2)
        assert np.allclose(d1, d2, rtol=1e-12, atol=1e-12)


def test_assign_labels_tie_goes_low():
    X = np.array([[0.5, 0.5]])
    C = np.array([[0.0, 0.0], [1.0, 1.0]])
    for fn in (kernels._assign_labels_loop, kernels._assign_labels_np):
        labels, _ = fn(X, C)
        assert labels[0] == 0


def test_centroid_sums_parity():
    for _ in range(20):
        X = rng.uniform(0, 1, size=(rng.integers(1, 80), rng.integers(1, 5)))
        k = int(rng.integers(1, 6))
        labels = rng.integers(0, k, size=X.shape[0])
        s1, c1 = kernels._centroid_sums_loop(X, labels, k)
        s2, c2 = kernels._centroid_sums_np(X, labels, k)
        assert np.array_equal(c1, c2)
        assert np.allclose(s1, s2, rtol=1e-12, atol=1e-15)


def test_segment_distances_parity_and_values():
    p = _pairs(200)
    d1 = kernels._segment_distances_loop(p[:, 0], p[:, 1], 0.0, 0.0, 2.0, 0.0)
    d2 = kernels._segment_distances_np(p[:, 0], p[:, 1], 0.0, 0.0, 2.0, 0.0)
    assert np.allclose(d1, d2, rtol=0, atol=1e-12)
    # hand values: beyond endpoints clamps to endpoint distance
    d = kernels._segment_distances_np(
        np.array([-1.0, 1.0, 3.0]), np.array([0.0, 2.0, 0.0]), 0.0, 0.0, 2.0, 0.0
    )
    assert np.allclose(d, [1.0, 2.0, 1.0])


def test_segment_distances_degenerate_segment():
    d = kernels._segment_distances_np(np.array([3.0]), np.array([4.0]), 0.0, 0.0, 0.0, 0.0)
    assert np.allclose(d, [5.0])


def test_ring_codes_parity():
    sq = np.array([(0, 0), (4, 0), (4, 4), (0, 4)], dtype=np.float64)
    p = rng.uniform(-1, 5, size=(500, 2))
    c1 = kernels._ring_codes_loop(p[:, 0], p[:, 1], sq[:, 0], sq[:, 1], 1e-9)
    c2 = kernels._ring_codes_np(p[:, 0], p[:, 1], sq[:, 0], sq[:, 1], 1e-9)
    assert np.array_equal(c1, c2)


def test_ring_codes_boundary_band():
    sq = np.array([(0, 0), (4, 0), (4, 4), (0, 4)], dtype=np.float64)
    px = np.array([2.0, 2.0, 2.0, -1.0])
    py = np.array([2.0, 0.0, 4.0 + 5e-10, 2.0])
    for fn in (kernels._ring_codes_loop, kernels._ring_codes_np):
        codes = fn(px, py, sq[:, 0], sq[:, 1], 1e-9)
        assert list(codes) == [1, 2, 2, 0]


SEGMENT_CASES = [
    # (a, b, c, d, conflict)
    ((0, 0), (2, 2), (0, 2), (2, 0), True),  # proper crossing
    ((0, 0), (2, 0), (3, 0), (5, 0), False),  # disjoint collinear
    ((0, 0), (2, 0), (1, 0), (3, 0), True),  # collinear overlap
    ((0, 0), (2, 0), (2, 0), (4, 0), False),  # shared endpoint, straight continuation
    ((0, 0), (2, 0), (2, 0), (1, 0), True),  # shared endpoint, folds back over the edge
    ((0, 0), (2, 0), (2, 0), (2, 2), False),  # shared endpoint, bend
    ((0, 0), (2, 0), (1, 0), (1, 2), True),  # T-touch mid-edge
    ((0, 0), (2, 0), (0, 0), (2, 0), True),  # identical
    ((0, 0), (2, 0), (2, 0), (0, 0), True),  # reversed identical
    ((0, 0), (2, 0), (0, 1), (2, 1), False),  # parallel apart
    ((0, 0), (1, 1), (2, 2), (3, 3), False),  # collinear, gap
]


@pytest.mark.parametrize("a,b,c,d,want", SEGMENT_CASES)
def test_segments_conflict_cases(a, b, c, d, want):
    assert kernels.segments_conflict(a, b, c, d) is want
    # symmetric in segment order and endpoint order
    assert kernels.segments_conflict(c, d, a, b) is want
    assert kernels.segments_conflict(b, a, d, c) is want


@pytest.mark.parametrize("a,b,c,d,want", SEGMENT_CASES)
def test_segment_blocked_parity(a, b, c, d, want):
    e1 = np.array([float(c[0])])
    e2 = np.array([float(c[1])])
    e3 = np.array([float(d[0])])
    e4 = np.array([float(d[1])])
    got_np = kernels._segment_blocked_np(
        float(a[0]), float(a[1]), float(b[0]), float(b[1]), e1, e2, e3, e4, 0.0
    )
    assert bool(got_np) is want


def test_segment_blocked_scans_whole_batch():
    # 10 harmless edges plus one crossing edge at the end
    ex1 = np.array([float(i) for i in range(10)] + [0.0])
    ey1 = np.array([10.0] * 10 + [2.0])
    ex2 = ex1 + 0.5
    ey2 = np.array([10.0] * 10 + [-2.0])
    ey2[:10] = 10.0
    assert kernels.segment_blocked(-1.0, 0.0, 1.0, 0.0, ex1, ey1, ex2, ey2, 0.0)
    assert not kernels.segment_blocked(-1.0, 0.0, 1.0, 0.0, ex1[:10], ey1[:10], ex2[:10], ey2[:10], 0.0)


def test_random_segment_blocked_parity():
    for _ in range(200):
        seg = rng.uniform(-2, 2, size=4)
        m = int(rng.integers(1, 8))
        edges = rng.uniform(-2, 2, size=(m, 4))
        got_np = kernels._segment_blocked_np(
            seg[0], seg[1], seg[2], seg[3],
            edges[:, 0].copy(), edges[:, 1].copy(), edges[:, 2].copy(), edges[:, 3].copy(), 0.0,
        )
        got_loop = kernels._segment_blocked_loop(
            seg[0], seg[1], seg[2], seg[3],
            edges[:, 0].copy(), edges[:, 1].copy(), edges[:, 2].copy(), edges[:, 3].copy(), 0.0,
        )
        assert bool(got_np) == bool(got_loop)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_numba_backend_selected_under_flag():
    code = "import spothull.kernels as k; print(k.backend())"
    for flag, want in (("1", "numba"), ("0", "numpy")):
        env = dict(os.environ, SPOTHULL_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
        )
        assert out.stdout.strip() == want


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_numba_kernels_match_numpy_fallback():
    env = dict(os.environ, SPOTHULL_NUMBA="1")
    code = """
import numpy as np
import spothull.kernels as k
assert k.backend() == "numba"
rng = np.random.default_rng(7)
X = rng.uniform(0, 1, size=(50, 4)); C = rng.uniform(0, 1, size=(5, 4))
l1, d1 = k.assign_labels(X, C)
l2, d2 = k._assign_labels_np(X, C)
assert np.array_equal(l1, l2) and np.allclose(d1, d2, atol=1e-12)
sq = np.array([(0,0),(4,0),(4,4),(0,4)], dtype=np.float64)
p = rng.uniform(-1, 5, size=(200, 2))
assert np.array_equal(k.ring_codes(p[:,0], p[:,1], sq[:,0], sq[:,1], 1e-9),
                      k._ring_codes_np(p[:,0], p[:,1], sq[:,0], sq[:,1], 1e-9))
print("ok")
"""
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
