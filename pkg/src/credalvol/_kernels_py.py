"""Pure-numpy versions of the hot loops in :mod:`credalvol._kernels`."""

import numpy as np

_BLOCK = 1 << 15


def count_inside(points, normals, offsets, tol):
    """Number of rows ``x`` with ``normals @ x + offsets <= tol`` componentwise."""
    total = 0
    for start in range(0, len(points), _BLOCK):
        block = points[start:start + _BLOCK]
        viol = block @ normals.T + offsets
        total += int(np.count_nonzero(np.all(viol <= tol, axis=1)))
    return total


def min_slack(points, normals, offsets):
    """Smallest facet slack ``-(a . x + o)`` per row; the distance to the boundary for interior points."""
    out = np.empty(len(points))
    for start in range(0, len(points), _BLOCK):
        block = points[start:start + _BLOCK]
        out[start:start + _BLOCK] = -(block @ normals.T + offsets).max(axis=1)
    return out


def greedy_select(candidates, order, min_dist):
    """Scan ``candidates`` in ``order``; keep each one at distance >= min_dist from all kept."""
    k = candidates.shape[1]
    kept = np.empty((len(order), k))
    idx = np.empty(len(order), dtype=np.int64)
    md2 = min_dist * min_dist
    cnt = 0
    for i in order:
        x = candidates[i]
        if cnt:
            diff = kept[:cnt] - x
            if np.min(np.einsum("ij,ij->i", diff, diff)) < md2:
                continue
        kept[cnt] = x
        idx[cnt] = i
        cnt += 1
    return idx[:cnt].copy()
