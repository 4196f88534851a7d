"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise, or when
``CREDALVOL_PURE_PYTHON=1`` is set, the numpy implementations are used.
Both expose ``count_inside``, ``min_slack`` and ``greedy_select``.
"""

import os

import numpy as np

from . import _kernels_py

_compiled = None
if os.environ.get("CREDALVOL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py


def compiled_available():
    return _compiled is not None


def _c(a, dtype=float):
    return np.ascontiguousarray(a, dtype=dtype)


def count_inside(points, normals, offsets, tol=1e-12, impl=None):
    mod = impl or _impl
    return int(mod.count_inside(_c(points), _c(normals), _c(offsets), float(tol)))


def min_slack(points, normals, offsets, impl=None):
    mod = impl or _impl
    return np.asarray(mod.min_slack(_c(points), _c(normals), _c(offsets)))


def greedy_select(candidates, order, min_dist, impl=None):
    mod = impl or _impl
    return np.asarray(
        mod.greedy_select(_c(candidates), _c(order, np.int64), float(min_dist))
    )
