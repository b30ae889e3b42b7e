# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures and outputs."""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t, uint64_t

cnp.import_array()

cdef uint64_t FNV_OFFSET = 0xCBF29CE484222325ULL
cdef uint64_t FNV_PRIME = 0x100000001B3ULL
cdef uint64_t EMPTY = 0xFFFFFFFFFFFFFFFFULL


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def fnv1a64_many(items):
    cdef Py_ssize_t n = len(items)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] out = np.empty(n, dtype=np.uint64)
    cdef const uint8_t[:] view
    cdef uint64_t h
    cdef Py_ssize_t i, j
    for i in range(n):
        b = items[i]
        h = FNV_OFFSET
        if len(b):
            view = b
            for j in range(view.shape[0]):
                h = (h ^ view[j]) * FNV_PRIME
        out[i] = h
    return out


def minhash_signatures(hashes, offsets, salts):
    cdef const uint64_t[::1] hv = np.ascontiguousarray(hashes, dtype=np.uint64)
    cdef const int64_t[::1] ov = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const uint64_t[::1] sv = np.ascontiguousarray(salts, dtype=np.uint64)
    cdef Py_ssize_t n = ov.shape[0] - 1
    cdef Py_ssize_t m = sv.shape[0]
    sigs_arr = np.full((n, m), EMPTY, dtype=np.uint64)
    cdef uint64_t[:, ::1] sigs = sigs_arr
    cdef Py_ssize_t r, i, p
    cdef uint64_t salt, v, best
    with nogil:
        for r in range(n):
            if ov[r + 1] <= ov[r]:
                continue
            for i in range(m):
                salt = sv[i]
                best = EMPTY
                for p in range(ov[r], ov[r + 1]):
                    v = _mix(hv[p] ^ salt)
                    if v < best:
                        best = v
                sigs[r, i] = best
    return sigs_arr


def similar_pairs(sigs, Py_ssize_t min_matches):
    cdef const uint64_t[:, ::1] sv = np.ascontiguousarray(sigs, dtype=np.uint64)
    cdef Py_ssize_t n = sv.shape[0]
    cdef Py_ssize_t m = sv.shape[1]
    cdef Py_ssize_t i, j, c, hits, cap = 1024, count = 0
    firsts = np.empty(cap, dtype=np.int64)
    seconds = np.empty(cap, dtype=np.int64)
    counts = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] fv = firsts
    cdef int64_t[::1] sv2 = seconds
    cdef int64_t[::1] cv = counts
    for i in range(n - 1):
        for j in range(i + 1, n):
            hits = 0
            for c in range(m):
                if sv[i, c] == sv[j, c]:
                    hits += 1
                # the remaining components cannot lift the pair over the bar
                elif hits + (m - c - 1) < min_matches:
                    break
            if hits >= min_matches:
                if count == cap:
                    cap *= 2
                    firsts = np.resize(firsts, cap)
                    seconds = np.resize(seconds, cap)
                    counts = np.resize(counts, cap)
                    fv = firsts
                    sv2 = seconds
                    cv = counts
                fv[count] = i
                sv2[count] = j
                cv[count] = hits
                count += 1
    pairs = np.column_stack([firsts[:count], seconds[:count]]).astype(np.int64)
    return pairs, counts[:count].copy()
