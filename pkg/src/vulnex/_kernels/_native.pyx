# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled aggregation kernels.

Same contracts as vulnex._kernels.pure; see that module for the array
layout. Tight typed loops instead of numpy ufunc dispatch.
"""

import numpy as np


cdef inline int _popcount64(unsigned long long x) nogil:
    x = x - ((x >> 1) & 0x5555555555555555ULL)
    x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0FULL
    return <int>((x * 0x0101010101010101ULL) >> 56)


def mask_words(n_bits):
    return max(1, (int(n_bits) + 63) // 64)


def build_masks(long long[::1] indptr, long long[::1] bit_idx, int n_words):
    cdef long long n_rows = indptr.shape[0] - 1
    out = np.zeros((n_rows, n_words), dtype=np.uint64)
    cdef unsigned long long[:, ::1] masks = out
    cdef long long row, k, j
    with nogil:
        for row in range(n_rows):
            for k in range(indptr[row], indptr[row + 1]):
                j = bit_idx[k]
                masks[row, j >> 6] |= (<unsigned long long>1) << (j & 63)
    return out


def or_reduce(long long[::1] indptr, long long[::1] member_rows,
              unsigned long long[:, ::1] source):
    cdef long long n_groups = indptr.shape[0] - 1
    cdef int n_words = source.shape[1]
    out = np.zeros((n_groups, n_words), dtype=np.uint64)
    cdef unsigned long long[:, ::1] masks = out
    cdef long long g, k, src
    cdef int w
    with nogil:
        for g in range(n_groups):
            for k in range(indptr[g], indptr[g + 1]):
                src = member_rows[k]
                for w in range(n_words):
                    masks[g, w] |= source[src, w]
    return out


def popcounts(unsigned long long[:, ::1] masks):
    cdef long long n_rows = masks.shape[0]
    cdef int n_words = masks.shape[1]
    out = np.zeros(n_rows, dtype=np.int64)
    cdef long long[::1] counts = out
    cdef long long row, total
    cdef int w
    with nogil:
        for row in range(n_rows):
            total = 0
            for w in range(n_words):
                total += _popcount64(masks[row, w])
            counts[row] = total
    return out


def bucket_counts(unsigned long long[:, ::1] masks, signed char[::1] bucket):
    cdef long long n_rows = masks.shape[0]
    cdef int n_words = masks.shape[1]
    cdef long long n_cves = bucket.shape[0]
    # Per-bucket selector masks, built once.
    sel_arr = np.zeros((5, n_words), dtype=np.uint64)
    cdef unsigned long long[:, ::1] sel = sel_arr
    out = np.zeros((n_rows, 5), dtype=np.int64)
    cdef long long[:, ::1] counts = out
    cdef long long row, j
    cdef int w, code
    with nogil:
        for j in range(n_cves):
            sel[bucket[j], j >> 6] |= (<unsigned long long>1) << (j & 63)
        for row in range(n_rows):
            for code in range(5):
                for w in range(n_words):
                    counts[row, code] += _popcount64(masks[row, w] & sel[code, w])
    return out


def max_scores(unsigned long long[:, ::1] masks, short[::1] score_tenths, chunk=4096):
    cdef long long n_rows = masks.shape[0]
    cdef long long n_cves = score_tenths.shape[0]
    out = np.full(n_rows, -1, dtype=np.int16)
    cdef short[::1] best = out
    cdef long long row, j
    cdef unsigned long long word
    cdef short score
    with nogil:
        for row in range(n_rows):
            for j in range(n_cves):
                word = masks[row, j >> 6]
                if (word >> (j & 63)) & 1:
                    score = score_tenths[j]
                    if score > best[row]:
                        best[row] = score
    return out
