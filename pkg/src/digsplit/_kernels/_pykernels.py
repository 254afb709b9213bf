"""Vectorised numpy versions of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same results; the package picks one at import time.
"""

import numpy as np

_DENSE_LIMIT = 4096
_SCAN_CHUNK = 1 << 16


def _rows(indptr):
    n = len(indptr) - 1
    return np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))


def _gather(indptr, vertices):
    """Positions into ``indices`` for the out-lists of ``vertices``, plus owner slot."""
    starts = indptr[vertices]
    lens = indptr[vertices + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    owner = np.repeat(np.arange(len(vertices), dtype=np.int64), lens)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lens) - lens, lens)
    return starts[owner] + offsets, owner


def count_into(indptr, indices, member):
    n = len(indptr) - 1
    if len(indices) == 0:
        return np.zeros(n, dtype=np.int64)
    hits = member[indices].astype(np.int64)
    return np.bincount(_rows(indptr), weights=hits, minlength=n).astype(np.int64)


def same_side_counts(indptr, indices, side):
    ones = count_into(indptr, indices, side)
    dplus = np.diff(indptr)
    return np.where(side.astype(bool), ones, dplus - ones)


def batch_same_side_counts(indptr, indices, sides):
    n = len(indptr) - 1
    sides = np.ascontiguousarray(sides, dtype=np.uint8)
    dplus = np.diff(indptr)
    if n <= _DENSE_LIMIT:
        dense = np.zeros((n, n), dtype=np.float32)
        dense[_rows(indptr), indices] = 1.0
        ones = np.rint(sides.astype(np.float32) @ dense.T).astype(np.int64)
    else:
        ones = np.stack([count_into(indptr, indices, row) for row in sides])
    return np.where(sides.astype(bool), ones, dplus[None, :] - ones)


def recount(indptr, indices, side, counts, vertices):
    vertices = np.asarray(vertices, dtype=np.int64)
    if len(vertices) == 0:
        return
    pos, owner = _gather(indptr, vertices)
    same = side[indices[pos]] == side[vertices[owner]]
    counts[vertices] = np.bincount(owner, weights=same, minlength=len(vertices)).astype(np.int64)


def core_peel(in_indptr, in_indices, alive, deg, theta):
    while True:
        viol = np.flatnonzero(alive.astype(bool) & (deg < theta))
        if len(viol) == 0:
            return int(alive.sum())
        alive[viol] = 0
        pos, _ = _gather(in_indptr, viol)
        if len(pos):
            deg -= np.bincount(in_indices[pos], minlength=len(deg))


def split_scan(outmask, n, s, t, min_size, max_size):
    outmask = np.asarray(outmask, dtype=np.uint64)
    full = np.uint64((1 << n) - 1)
    hi = (1 << n) - 1
    for lo in range(1, hi, _SCAN_CHUNK):
        masks = np.arange(lo, min(lo + _SCAN_CHUNK, hi), dtype=np.uint64)
        size = np.bitwise_count(masks)
        ok = (size >= min_size) & (size <= max_size)
        comp = ~masks & full
        for v in range(n):
            if not ok.any():
                break
            in_a = ((masks >> np.uint64(v)) & np.uint64(1)).astype(bool)
            into_a = np.bitwise_count(masks & outmask[v])
            into_b = np.bitwise_count(comp & outmask[v])
            ok &= np.where(in_a, into_a >= s, into_b >= t)
        hit = np.flatnonzero(ok)
        if len(hit):
            return int(masks[hit[0]])
    return -1
