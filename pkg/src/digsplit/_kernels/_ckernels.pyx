# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; signatures mirror ``_pykernels``."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t, uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def count_into(const int64_t[::1] indptr, const int64_t[::1] indices,
               const uint8_t[::1] member):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, j
    cdef int64_t c
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] res = out
    with nogil:
        for v in range(n):
            c = 0
            for j in range(indptr[v], indptr[v + 1]):
                c += member[indices[j]]
            res[v] = c
    return out


cdef inline void _same_side(const int64_t[::1] indptr, const int64_t[::1] indices,
                            const uint8_t[:] side, int64_t[:] res) noexcept nogil:
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, j
    cdef int64_t c
    cdef uint8_t sv
    for v in range(n):
        c = 0
        sv = side[v]
        for j in range(indptr[v], indptr[v + 1]):
            c += side[indices[j]] == sv
        res[v] = c


def same_side_counts(const int64_t[::1] indptr, const int64_t[::1] indices,
                     const uint8_t[::1] side):
    out = np.zeros(indptr.shape[0] - 1, dtype=np.int64)
    cdef int64_t[::1] res = out
    with nogil:
        _same_side(indptr, indices, side, res)
    return out


def batch_same_side_counts(const int64_t[::1] indptr, const int64_t[::1] indices,
                           sides):
    cdef const uint8_t[:, ::1] sv = np.ascontiguousarray(sides, dtype=np.uint8)
    cdef Py_ssize_t s
    out = np.zeros((sv.shape[0], indptr.shape[0] - 1), dtype=np.int64)
    cdef int64_t[:, ::1] res = out
    with nogil:
        for s in range(sv.shape[0]):
            _same_side(indptr, indices, sv[s], res[s])
    return out


def recount(const int64_t[::1] indptr, const int64_t[::1] indices,
            const uint8_t[::1] side, int64_t[::1] counts, vertices):
    cdef const int64_t[::1] vs = np.ascontiguousarray(vertices, dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef int64_t v, c
    with nogil:
        for i in range(vs.shape[0]):
            v = vs[i]
            c = 0
            for j in range(indptr[v], indptr[v + 1]):
                c += side[indices[j]] == side[v]
            counts[v] = c


def core_peel(const int64_t[::1] in_indptr, const int64_t[::1] in_indices,
              uint8_t[::1] alive, int64_t[::1] deg, const int64_t[::1] theta):
    cdef Py_ssize_t n = alive.shape[0]
    cdef Py_ssize_t v, j, u, head = 0, tail = 0, remaining = 0
    stack_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] queue = stack_arr
    with nogil:
        for v in range(n):
            if alive[v]:
                if deg[v] < theta[v]:
                    alive[v] = 0
                    queue[tail] = v
                    tail += 1
                else:
                    remaining += 1
        while head < tail:
            v = queue[head]
            head += 1
            for j in range(in_indptr[v], in_indptr[v + 1]):
                u = in_indices[j]
                deg[u] -= 1
                if alive[u] and deg[u] < theta[u]:
                    alive[u] = 0
                    remaining -= 1
                    queue[tail] = u
                    tail += 1
    return remaining


def split_scan(const uint64_t[::1] outmask, int n, int64_t s, int64_t t,
               int min_size, int max_size):
    cdef uint64_t full = (<uint64_t>1 << n) - 1
    cdef uint64_t mask, comp
    cdef int v, size
    cdef bint ok
    with nogil:
        mask = 1
        while mask < full:
            size = __builtin_popcountll(mask)
            if min_size <= size <= max_size:
                comp = ~mask & full
                ok = True
                for v in range(n):
                    if (mask >> v) & 1:
                        if __builtin_popcountll(mask & outmask[v]) < s:
                            ok = False
                            break
                    elif __builtin_popcountll(comp & outmask[v]) < t:
                        ok = False
                        break
                if ok:
                    with gil:
                        return int(mask)
            mask += 1
    return -1
