"""Time each kernel with numba against its numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Results are checked for equality before timing.  Numba compile time is
excluded by a warm-up call.
"""

import argparse
import time

import numpy as np

from geolam import kernels
from geolam.torus import farey_slopes


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    bden = np.array([s.p + s.q for s in farey_slopes(802)], dtype=np.int64)
    lengths = np.arange(3, 402, 2, dtype=np.int64)
    yield "census_counts", kernels.census_counts_numba, kernels.census_counts_numpy, (bden, lengths)

    us = np.arange(1001, dtype=np.float64) / 4000.0
    yield "dlog_margin_grid", kernels.dlog_margin_grid_numba, kernels.dlog_margin_grid_numpy, (us,)

    rng = np.random.default_rng(0)
    n = 120
    # depths of an ultrametric built from random leaf labels, with a few faults
    labels = rng.integers(0, 4, size=(n, 6))
    depth = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            same = labels[i] == labels[j]
            depth[i, j] = 6 if same.all() else int(np.argmin(same))
    depth[3, 7] = depth[7, 3] = 0
    yield "ultrametric_violations", kernels.ultrametric_violations_numba, \
        kernels.ultrametric_violations_numpy, (depth,)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<24}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fast, slow, inputs in cases():
        a, b = fast(*inputs), slow(*inputs)  # warm-up and agreement
        if isinstance(a, np.ndarray):
            assert np.array_equal(a, b), name
        else:
            assert a[1:] == b[1:] and abs(a[0] - b[0]) < 1e-12, name
        tf = best_of(lambda: fast(*inputs), args.repeat)
        ts = best_of(lambda: slow(*inputs), args.repeat)
        print(f"{name:<24}{tf:>12.5f}{ts:>12.5f}{ts / tf:>9.1f}x")


if __name__ == "__main__":
    main()
