"""Aggregation kernels: compiled extension when built, pure fallback otherwise.

The graph layer funnels all per-entity CVE-set math (bitmask construction,
subtree unions, distinct counts, severity bucket histograms, max scores)
through this package. ``IMPLEMENTATION`` reports which backend was selected;
set ``VULNEX_PURE_KERNELS=1`` to force the fallback (used by the differential
tests and the benchmark).
"""

from __future__ import annotations

import os

from vulnex._kernels import pure

if os.environ.get("VULNEX_PURE_KERNELS") == "1":
    _impl = pure
    IMPLEMENTATION = "pure"
else:
    try:
        from vulnex._kernels import _native as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "native"
    except ImportError:
        _impl = pure
        IMPLEMENTATION = "pure"

mask_words = _impl.mask_words
build_masks = _impl.build_masks
or_reduce = _impl.or_reduce
popcounts = _impl.popcounts
bucket_counts = _impl.bucket_counts
max_scores = _impl.max_scores

N_BUCKETS = pure.N_BUCKETS

__all__ = [
    "IMPLEMENTATION",
    "N_BUCKETS",
    "mask_words",
    "build_masks",
    "or_reduce",
    "popcounts",
    "bucket_counts",
    "max_scores",
]
