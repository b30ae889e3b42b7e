"""Numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled version is tested against.
"""
import numpy as np

FNV_OFFSET = np.uint64(0xCBF29CE484222325)
FNV_PRIME = np.uint64(0x100000001B3)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_EMPTY = np.uint64(0xFFFFFFFFFFFFFFFF)


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def fnv1a64_many(items):
    n = len(items)
    out = np.full(n, FNV_OFFSET, dtype=np.uint64)
    if n == 0:
        return out
    lengths = np.fromiter((len(b) for b in items), dtype=np.int64, count=n)
    width = int(lengths.max())
    if width == 0:
        return out
    buf = np.zeros((n, width), dtype=np.uint8)
    for row, b in enumerate(items):
        if b:
            buf[row, : len(b)] = np.frombuffer(b, dtype=np.uint8)
    with np.errstate(over="ignore"):
        for col in range(width):
            live = lengths > col
            h = out[live] ^ buf[live, col].astype(np.uint64)
            out[live] = h * FNV_PRIME
    return out


def minhash_signatures(hashes, offsets, salts):
    hashes = np.ascontiguousarray(hashes, dtype=np.uint64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    salts = np.ascontiguousarray(salts, dtype=np.uint64)
    n = len(offsets) - 1
    m = len(salts)
    sigs = np.full((n, m), _EMPTY, dtype=np.uint64)
    if n == 0 or len(hashes) == 0:
        return sigs
    sizes = np.diff(offsets)
    nonempty = np.flatnonzero(sizes > 0)
    starts = offsets[:-1][nonempty]
    with np.errstate(over="ignore"):
        for i in range(m):
            mixed = _mix(hashes ^ salts[i])
            sigs[nonempty, i] = np.minimum.reduceat(mixed, starts)
    return sigs


def similar_pairs(sigs, min_matches):
    sigs = np.ascontiguousarray(sigs, dtype=np.uint64)
    n = sigs.shape[0]
    firsts, seconds, counts = [], [], []
    for i in range(n - 1):
        matches = (sigs[i + 1 :] == sigs[i]).sum(axis=1)
        hit = np.flatnonzero(matches >= min_matches)
        if hit.size:
            firsts.append(np.full(hit.size, i, dtype=np.int64))
            seconds.append(hit.astype(np.int64) + i + 1)
            counts.append(matches[hit].astype(np.int64))
    if not firsts:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.int64)
    pairs = np.column_stack([np.concatenate(firsts), np.concatenate(seconds)])
    return pairs, np.concatenate(counts)
