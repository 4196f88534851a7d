# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: halfspace hit counting, facet slack, greedy packing."""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor
from libc.stdlib cimport malloc, free

cnp.import_array()


def count_inside(const double[:, ::1] points, const double[:, ::1] normals,
                 const double[::1] offsets, double tol):
    cdef Py_ssize_t n = points.shape[0], m = normals.shape[0], k = points.shape[1]
    cdef Py_ssize_t i, f, j
    cdef double s
    cdef long long hits = 0
    cdef bint inside
    with nogil:
        for i in range(n):
            inside = True
            for f in range(m):
                s = offsets[f]
                for j in range(k):
                    s = s + normals[f, j] * points[i, j]
                if s > tol:
                    inside = False
                    break
            if inside:
                hits += 1
    return hits


def min_slack(const double[:, ::1] points, const double[:, ::1] normals,
              const double[::1] offsets):
    cdef Py_ssize_t n = points.shape[0], m = normals.shape[0], k = points.shape[1]
    cdef Py_ssize_t i, f, j
    cdef double s, worst
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            worst = -1e300
            for f in range(m):
                s = offsets[f]
                for j in range(k):
                    s = s + normals[f, j] * points[i, j]
                if s > worst:
                    worst = s
            o[i] = -worst
    return out


# dense cell lists are used while the grid stays below this many cells
cdef long long MAX_CELLS = 4000000


def greedy_select(const double[:, ::1] candidates, const long long[::1] order,
                  double min_dist):
    cdef Py_ssize_t n = order.shape[0], k = candidates.shape[1]
    cdef Py_ssize_t i, j, c, cnt = 0, total_cells = 1, nb, t, cell, q
    cdef double md2 = min_dist * min_dist, d2, diff
    cdef bint ok
    idx = np.empty(n, dtype=np.int64)
    cdef long long[::1] out = idx
    if n == 0:
        return idx[:0].copy()

    lo_arr = np.min(np.asarray(candidates), axis=0)
    hi_arr = np.max(np.asarray(candidates), axis=0)
    dims_arr = np.floor((hi_arr - lo_arr) / min_dist).astype(np.int64) + 1
    cdef double[::1] lo = lo_arr
    cdef long long[::1] dims = dims_arr
    for j in range(k):
        total_cells *= dims[j]
        if total_cells > MAX_CELLS:
            break

    if total_cells > MAX_CELLS or k > 8:
        with nogil:
            for t in range(n):
                i = order[t]
                ok = True
                for c in range(cnt):
                    d2 = 0.0
                    for j in range(k):
                        diff = candidates[i, j] - candidates[out[c], j]
                        d2 = d2 + diff * diff
                    if d2 < md2:
                        ok = False
                        break
                if ok:
                    out[cnt] = i
                    cnt += 1
        return idx[:cnt].copy()

    head_arr = np.full(total_cells, -1, dtype=np.int64)
    nxt_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] head = head_arr
    cdef long long[::1] nxt = nxt_arr
    cdef long long *cellc = <long long *> malloc(k * sizeof(long long))
    cdef long long *probe = <long long *> malloc(k * sizeof(long long))
    cdef long long n_nb = 1
    for j in range(k):
        n_nb *= 3
    try:
        with nogil:
            for t in range(n):
                i = order[t]
                for j in range(k):
                    cellc[j] = <long long> floor((candidates[i, j] - lo[j]) / min_dist)
                    if cellc[j] >= dims[j]:
                        cellc[j] = dims[j] - 1
                ok = True
                for nb in range(n_nb):
                    q = nb
                    cell = 0
                    for j in range(k):
                        probe[j] = cellc[j] + (q % 3) - 1
                        q = q // 3
                        if probe[j] < 0 or probe[j] >= dims[j]:
                            cell = -1
                            break
                        cell = cell * dims[j] + probe[j]
                    if cell < 0:
                        continue
                    c = head[cell]
                    while c >= 0:
                        d2 = 0.0
                        for j in range(k):
                            diff = candidates[i, j] - candidates[out[c], j]
                            d2 = d2 + diff * diff
                        if d2 < md2:
                            ok = False
                            break
                        c = nxt[c]
                    if not ok:
                        break
                if ok:
                    cell = 0
                    for j in range(k):
                        cell = cell * dims[j] + cellc[j]
                    out[cnt] = i
                    nxt[cnt] = head[cell]
                    head[cell] = cnt
                    cnt += 1
    finally:
        free(cellc)
        free(probe)
    return idx[:cnt].copy()
