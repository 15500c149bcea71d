"""Benchmark: compiled kernels vs the pure-Python twin.

Times each kernel on synthetic workloads sized like a real scan and prints
a side-by-side table. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from wikiforensics._kernels import HAVE_EXT, _pure

if HAVE_EXT:
    from wikiforensics._kernels import _ext
else:
    _ext = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def workloads():
    rng = np.random.default_rng(12345)

    ids = rng.integers(0, 5_000, size=2_000_000).astype(np.int32)
    yield ("mtld_factor_count (2M tokens)",
           lambda impl: impl.mtld_factor_count(ids, 0.72))

    ng_ids = rng.integers(0, 50_000, size=500_000).astype(np.int32)
    bounds = np.concatenate([np.arange(0, 500_000, 250), [500_000]]).astype(np.int64)
    yield ("count_ngram_keys n=5 (500K tokens)",
           lambda impl: impl.count_ngram_keys(ng_ids, bounds, 5))

    values = np.sort(rng.normal(size=20_000))
    labels = rng.integers(0, 2, size=20_000).astype(np.int8)
    yield ("best_split_gini (20K rows)",
           lambda impl: impl.best_split_gini(values, labels, 1))

    grad = rng.normal(size=20_000)
    hess = rng.uniform(0.01, 0.25, size=20_000)
    yield ("best_split_gain (20K rows)",
           lambda impl: impl.best_split_gain(values, grad, hess, 1.0, 1))

    X5 = rng.normal(size=(3_000, 5))
    lab5 = rng.integers(0, 2, size=3_000).astype(np.int32)
    yield ("cluster_distance_sums (3K x 5)",
           lambda impl: impl.cluster_distance_sums(X5, lab5, 2))

    X300 = rng.normal(size=(1_500, 300))
    lab300 = rng.integers(0, 2, size=1_500).astype(np.int32)
    yield ("cluster_distance_sums (1.5K x 300)",
           lambda impl: impl.cluster_distance_sums(X300, lab300, 2))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_EXT:
        print("compiled kernels not built; timing the pure twin only")
    width = 44
    print(f"{'kernel':<{width}} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for name, call in workloads():
        pure_t = timeit(lambda: call(_pure), args.repeat)
        if _ext is not None:
            ext_t = timeit(lambda: call(_ext), args.repeat)
            ratio = pure_t / ext_t if ext_t > 0 else float("inf")
            print(f"{name:<{width}} {pure_t * 1e3:9.1f}ms {ext_t * 1e3:9.1f}ms "
                  f"{ratio:8.1f}x")
        else:
            print(f"{name:<{width}} {pure_t * 1e3:9.1f}ms {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()
