"""Pure (non-compiled) aggregation kernels.

Fallback used when the compiled extension is unavailable. Operates on the
same flat CSR-style arrays as the native module:

* entity CVE sets are bitmask rows, shape ``(n_entities, n_words)`` uint64,
  bit ``j`` of a row set iff CVE index ``j`` is in the entity's set;
* memberships are CSR pairs ``(indptr, indices)`` with int64 dtype.

Implementations here lean on numpy ufuncs instead of per-element Python
loops so the fallback stays usable at organization scale.
"""

from __future__ import annotations

import numpy as np

N_BUCKETS = 5  # unscored, low, medium, high, critical


def mask_words(n_bits: int) -> int:
    """Number of 64-bit words needed to hold ``n_bits`` bits (min 1)."""
    return max(1, (n_bits + 63) // 64)


def build_masks(indptr: np.ndarray, bit_idx: np.ndarray, n_words: int) -> np.ndarray:
    """Scatter CSR bit indices into per-row uint64 bitmasks."""
    n_rows = len(indptr) - 1
    masks = np.zeros((n_rows, n_words), dtype=np.uint64)
    if len(bit_idx) == 0:
        return masks
    rows = np.repeat(np.arange(n_rows, dtype=np.int64), np.diff(indptr))
    words = (bit_idx >> 6).astype(np.int64)
    bits = (np.uint64(1) << (bit_idx & 63).astype(np.uint64))
    flat = masks.reshape(-1)
    np.bitwise_or.at(flat, rows * n_words + words, bits)
    return masks


def or_reduce(indptr: np.ndarray, member_rows: np.ndarray, source: np.ndarray) -> np.ndarray:
    """OR-combine ``source`` mask rows per CSR group; empty groups yield zero."""
    n_groups = len(indptr) - 1
    out = np.zeros((n_groups, source.shape[1]), dtype=np.uint64)
    if len(member_rows) == 0 or n_groups == 0:
        return out
    gathered = source[member_rows]
    nonempty = np.diff(indptr) > 0
    # reduceat over nonempty group starts only: those starts are strictly
    # increasing and partition the gathered rows exactly, while empty
    # groups would otherwise corrupt their neighbors' slices.
    starts = indptr[:-1][nonempty]
    out[nonempty] = np.bitwise_or.reduceat(gathered, starts, axis=0)
    return out


def popcounts(masks: np.ndarray) -> np.ndarray:
    """Distinct-bit count per mask row."""
    return np.bitwise_count(masks).sum(axis=1, dtype=np.int64)


def bucket_counts(masks: np.ndarray, bucket: np.ndarray) -> np.ndarray:
    """Count set bits per severity bucket, per mask row.

    ``bucket`` assigns each CVE index a code 0..4; the result has shape
    ``(n_rows, 5)`` with one column per code.
    """
    n_words = masks.shape[1]
    out = np.empty((masks.shape[0], N_BUCKETS), dtype=np.int64)
    cves = np.arange(len(bucket), dtype=np.int64)
    for code in range(N_BUCKETS):
        selector = np.zeros(n_words, dtype=np.uint64)
        members = cves[bucket == code]
        if len(members) > 0:
            np.bitwise_or.at(
                selector,
                (members >> 6).astype(np.int64),
                np.uint64(1) << (members & 63).astype(np.uint64),
            )
        out[:, code] = np.bitwise_count(masks & selector).sum(axis=1, dtype=np.int64)
    return out


def max_scores(masks: np.ndarray, score_tenths: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Max score (in tenths) over each row's set bits; -1 when none scored.

    ``score_tenths`` maps CVE index to its score in tenths, -1 for unscored.
    """
    n_rows = masks.shape[0]
    n_cves = len(score_tenths)
    out = np.full(n_rows, -1, dtype=np.int16)
    if n_cves == 0 or n_rows == 0:
        return out
    word_idx = (np.arange(n_cves, dtype=np.int64) >> 6)
    bit_idx = (np.arange(n_cves, dtype=np.int64) & 63).astype(np.uint64)
    for start in range(0, n_rows, chunk):
        block = masks[start : start + chunk]
        present = ((block[:, word_idx] >> bit_idx) & np.uint64(1)).astype(bool)
        scores = np.where(present, score_tenths[np.newaxis, :], np.int16(-1))
        out[start : start + block.shape[0]] = scores.max(axis=1)
    return out
