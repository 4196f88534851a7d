"""Exact and Monte Carlo volume of credal polytopes.

Volumes are k-dimensional Hausdorff measures, k being the affine
dimension of the set, evaluated in an isometric chart.  For the full
simplex on d labels this gives sqrt(d)/(d-1)!.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionTooLarge, DimensionTooSmall
from .simplex import HULL_MAX_DIM, TOL_CONTAINS, distance_to_point

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class VolumeResult:
    k: int
    value: float
    stderr: float = 0.0
    method: str = "exact"

    def as_dict(self):
        return {"k": self.k, "value": self.value, "stderr": self.stderr, "method": self.method}


def simplex_volume(d):
    """(d-1)-volume of the probability simplex on d labels, sqrt(d)/(d-1)!."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if d > 20:
        return math.exp(0.5 * math.log(d) - math.lgamma(d))
    return math.sqrt(d) / math.factorial(d - 1)


def ball_volume(k, r=1.0):
    """Lebesgue measure of a radius-r ball in R^k."""
    if k == 0:
        return 1.0
    return math.exp(0.5 * k * math.log(math.pi) - math.lgamma(0.5 * k + 1)) * r**k


def volume_exact(P):
    """Exact volume of P at its own affine dimension.

    Fan triangulation from the first vertex over the (simplicial) hull
    facets; a point has volume 0.
    """
    k = P.k
    if k == 0:
        return VolumeResult(0, 0.0)
    if k > HULL_MAX_DIM:
        raise DimensionTooLarge(f"affine dimension {k} > {HULL_MAX_DIM}; use volume_mc")
    X = P.coords
    if k == 1:
        return VolumeResult(1, float(X[:, 0].max() - X[:, 0].min()))
    facets = P.hull.simplices
    facets = facets[~np.any(facets == 0, axis=1)]
    if len(facets) == 0:
        return VolumeResult(k, 0.0)
    edges = X[facets] - X[0]
    dets = np.abs(np.linalg.det(edges))
    return VolumeResult(k, float(dets.sum() / math.factorial(k)))


def volume_fixed_dim(P, k_requested):
    """Volume of P measured in dimension ``k_requested`` (0 if P is thinner)."""
    if k_requested < P.k:
        raise DimensionTooSmall(
            f"requested dimension {k_requested} below affine dimension {P.k}"
        )
    if k_requested > P.k:
        return 0.0
    return volume_exact(P).value


def resolve_threads(threads=None):
    if threads is None:
        threads = int(os.environ.get("CREDALVOL_THREADS", "1") or 1)
    return max(1, int(threads))


def chunk_rng(seed, index):
    """Counter-style substream: chunk ``index`` of run ``seed``."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),)))
    )


def _chunk_sizes(samples, chunk_size):
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def volume_mc(P, samples=100_000, seed=0, chunk_size=DEFAULT_CHUNK, membership="auto",
              threads=None):
    """Hit-or-miss estimate over the chart bounding box.

    ``membership="halfspace"`` tests points against the facet
    inequalities, ``"nearest"`` runs the nearest-point test of
    :func:`credalvol.simplex.contains` on each sample; ``"auto"`` picks
    the former whenever an H-representation exists.  The estimate only
    depends on ``(seed, samples, chunk_size)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    k = P.k
    if k == 0:
        return VolumeResult(0, 0.0, 0.0, "exact")
    if membership == "auto":
        membership = "halfspace" if k <= HULL_MAX_DIM else "nearest"
    X = P.coords
    lo, hi = X.min(axis=0), X.max(axis=0)
    box = float(np.prod(hi - lo))

    if membership == "halfspace":
        normals, offsets = P.halfspaces

        def hits_in(i, n):
            pts = lo + (hi - lo) * chunk_rng(seed, i).random((n, k))
            return kernels.count_inside(pts, normals, offsets, TOL_CONTAINS)
    elif membership == "nearest":
        def hits_in(i, n):
            pts = P.chart.from_chart(lo + (hi - lo) * chunk_rng(seed, i).random((n, k)))
            return sum(distance_to_point(P, x) <= TOL_CONTAINS for x in pts)
    else:
        raise ValueError(f"unknown membership test {membership!r}")

    sizes = _chunk_sizes(samples, chunk_size)
    workers = resolve_threads(threads)
    if workers == 1 or len(sizes) == 1:
        hits = sum(hits_in(i, n) for i, n in enumerate(sizes))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(hits_in, range(len(sizes)), sizes))
    p_hat = hits / samples
    stderr = box * math.sqrt(p_hat * (1.0 - p_hat) / samples)
    return VolumeResult(k, box * p_hat, stderr, "monte-carlo")


def volume(P, samples=100_000, seed=0):
    """Exact volume when feasible, Monte Carlo otherwise."""
    if P.k <= HULL_MAX_DIM:
        return volume_exact(P)
    return volume_mc(P, samples=samples, seed=seed)
