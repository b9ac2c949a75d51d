"""Benchmark the aggregation kernels: compiled extension vs pure fallback.

Generates a synthetic organization-scale workload (CSR memberships over
a shared CVE universe), runs every kernel through both backends, checks
the outputs agree bit for bit, and prints per-kernel timings.

Usage:
    python3 benchmarks/bench_kernels.py [--libs 600] [--modules 1500]
                                        [--cves 500] [--repeats 7]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vulnex._kernels import pure

try:
    from vulnex._kernels import _native as native
except ImportError:
    native = None


def random_csr(rng: np.random.Generator, n_rows: int, n_values: int, avg_degree: float):
    degrees = rng.poisson(avg_degree, n_rows).astype(np.int64)
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])
    indices = rng.integers(0, n_values, int(indptr[-1]), dtype=np.int64)
    return indptr, indices


def build_workload(args: argparse.Namespace):
    rng = np.random.default_rng(7)
    n_words = pure.mask_words(args.cves)

    lib_indptr, lib_cves = random_csr(rng, args.libs, args.cves, args.cves / args.libs * 2)
    mod_indptr, mod_libs = random_csr(rng, args.modules, args.libs, 8.0)
    lib_masks = pure.build_masks(lib_indptr, lib_cves, n_words)
    module_masks = pure.or_reduce(mod_indptr, mod_libs, lib_masks)

    # same dtypes the graph layer feeds the kernels
    bucket = rng.integers(0, pure.N_BUCKETS, args.cves).astype(np.int8)
    tenths = rng.integers(-1, 101, args.cves).astype(np.int16)

    return {
        "build_masks": (lib_indptr, lib_cves, n_words),
        "or_reduce": (mod_indptr, mod_libs, lib_masks),
        "popcounts": (module_masks,),
        "bucket_counts": (module_masks, bucket),
        "max_scores": (module_masks, tenths),
    }


def best_of(fn, inputs, repeats: int) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*inputs)
        samples.append(time.perf_counter() - t0)
    return min(samples)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--libs", type=int, default=600)
    parser.add_argument("--modules", type=int, default=1500)
    parser.add_argument("--cves", type=int, default=500)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    workload = build_workload(args)
    print(
        f"workload: {args.libs} libraries, {args.modules} modules, "
        f"{args.cves} CVEs, best of {args.repeats}"
    )
    if native is None:
        print("compiled extension not built; timing the pure backend only")

    header = f"{'kernel':<14} {'pure':>10} {'native':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, inputs in workload.items():
        pure_fn = getattr(pure, name)
        t_pure = best_of(pure_fn, inputs, args.repeats)
        if native is None:
            print(f"{name:<14} {t_pure * 1e3:>8.3f}ms {'-':>10} {'-':>8}")
            continue
        native_fn = getattr(native, name)
        expected = pure_fn(*inputs)
        got = native_fn(*inputs)
        if not np.array_equal(np.asarray(expected), np.asarray(got)):
            raise SystemExit(f"{name}: backends disagree")
        t_native = best_of(native_fn, inputs, args.repeats)
        print(
            f"{name:<14} {t_pure * 1e3:>8.3f}ms {t_native * 1e3:>8.3f}ms "
            f"{t_pure / t_native:>7.1f}x"
        )


if __name__ == "__main__":
    main()
