#!/usr/bin/env python3
"""Timing comparison of the numba and numpy kernel backends.

Compiles the loop kernels with numba in-process (when importable) and times
them against the vectorized numpy fallbacks on realistic workload shapes,
checking agreement on the way. With --pipeline it also times one full
pipeline run per backend in subprocesses, since the backend binds at import.

    python3 benchmarks/bench_kernels.py [--repeats N] [--pipeline]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from spothull.kernels import (
    _assign_labels_loop,
    _assign_labels_np,
    _centroid_sums_loop,
    _centroid_sums_np,
    _ring_codes_loop,
    _ring_codes_np,
    _segment_blocked_np,
    _segment_distances_loop,
    _segment_distances_np,
    _segments_conflict_scalar,
)

try:
    from numba import njit
except ImportError:
    njit = None


def _best(fn, args, repeats):
    fn(*args)  # warm up (compilation, caches)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def _workloads(rng):
    X = rng.uniform(0, 1, size=(100_000, 8))
    C = rng.uniform(0, 1, size=(8, 8))
    labels = rng.integers(0, 8, size=100_000).astype(np.int64)
    px = rng.uniform(0, 1000, size=200_000)
    py = rng.uniform(0, 1000, size=200_000)
    theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    rx = 500 + 400 * np.cos(theta)
    ry = 500 + 400 * np.sin(theta)
    # parallel edge field: no conflicts, so early exit never fires
    ex1 = rng.uniform(0, 1000, size=20_000)
    ey1 = np.full(20_000, 2000.0)
    ex2 = ex1 + 5.0
    ey2 = ey1
    return {
        "assign_labels (100k x 8, k=8)": (
            _assign_labels_loop, _assign_labels_np, (X, C),
        ),
        "centroid_sums (100k x 8, k=8)": (
            _centroid_sums_loop, _centroid_sums_np, (X, labels, 8),
        ),
        "segment_distances (200k pts)": (
            _segment_distances_loop, _segment_distances_np,
            (px, py, 100.0, 100.0, 900.0, 900.0),
        ),
        "ring_codes (200k pts, 64-gon)": (
            _ring_codes_loop, _ring_codes_np, (px, py, rx, ry, 1e-9),
        ),
        "segment_blocked (20k edges)": (
            None, _segment_blocked_np,
            (10.0, 10.0, 990.0, 990.0, ex1, ey1, ex2, ey2, 0.0),
        ),
    }


def _compile_numba(name, loop_fn):
    if name.startswith("segment_blocked"):
        scalar = njit(_segments_conflict_scalar)

        @njit
        def blocked(ax, ay, bx, by, ex1, ey1, ex2, ey2, tol):
            for j in range(ex1.shape[0]):
                if scalar(ax, ay, bx, by, ex1[j], ey1[j], ex2[j], ey2[j], tol):
                    return True
            return False

        return blocked
    return njit(loop_fn)


def _check_agreement(a, b):
    if isinstance(a, tuple):
        return all(_check_agreement(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-12, atol=1e-12)


def bench_kernels(repeats):
    rng = np.random.default_rng(42)
    rows = []
    for name, (loop_fn, np_fn, args) in _workloads(rng).items():
        t_np = _best(np_fn, args, repeats)
        if njit is None:
            rows.append((name, t_np, None, None))
            continue
        fast = _compile_numba(name, loop_fn)
        if not _check_agreement(fast(*args), np_fn(*args)):
            raise SystemExit(f"backend disagreement on {name}")
        t_nb = _best(fast, args, repeats)
        rows.append((name, t_np, t_nb, t_np / t_nb))
    return rows


def bench_pipeline():
    code = (
        "import time\n"
        "from spothull.config import build_config\n"
        "from spothull.kernels import backend\n"
        "from spothull.model import serialize_dataset\n"
        "from spothull.pipeline import run_pipeline\n"
        "from spothull.synthetic import random_dataset\n"
        "import tempfile, pathlib\n"
        "ds, _ = random_dataset(n_spots=2000, n_types=8, n_blobs=6, seed=11)\n"
        "d = pathlib.Path(tempfile.mkdtemp())\n"
        "p = d / 'd.csv'\n"
        "p.write_text(serialize_dataset(ds, 'csv'))\n"
        "cfg = build_config(input=str(p), out=str(d / 'o'), k=6, seed=0)\n"
        "run_pipeline(cfg, write=False)\n"  # warm pass absorbs jit compilation
        "t0 = time.perf_counter()\n"
        "run_pipeline(cfg, write=False)\n"
        "print(f'{backend()} {time.perf_counter() - t0:.3f}')\n"
    )
    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, SPOTHULL_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        if proc.returncode != 0:
            rows.append((flag, None, proc.stderr.strip().splitlines()[-1]))
        else:
            name, secs = proc.stdout.split()
            rows.append((flag, float(secs), name))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--pipeline", action="store_true", help="also time full runs")
    opts = ap.parse_args()

    print(f"{'kernel':<34} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, t_np, t_nb, ratio in bench_kernels(opts.repeats):
        if t_nb is None:
            print(f"{name:<34} {t_np * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>8}")
        else:
            print(
                f"{name:<34} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms"
                f" {ratio:>7.1f}x"
            )
    if njit is None:
        print("numba not importable; numpy fallback timings only")

    if opts.pipeline:
        print()
        for flag, secs, note in bench_pipeline():
            if secs is None:
                print(f"pipeline SPOTHULL_NUMBA={flag}: failed ({note})")
            else:
                print(f"pipeline SPOTHULL_NUMBA={flag}: {secs:.3f}s ({note} backend)")


if __name__ == "__main__":
    main()
