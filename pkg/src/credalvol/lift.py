"""Lift probability sets: volume-matching embeddings into a larger simplex.

The search family is a tower of cones.  One step takes a credal set on
m labels, places an isometric copy on the facet {x_m = 0} of the
simplex on m + 1 labels, widens it toward the whole facet (parameter
``sigma``) and erects a cone with apex on the segment from the base
centroid to the new vertex e_m (parameter ``tau``).  The copy is kept
inside every base, and projecting onto the first coordinates maps it
back onto the original set.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InfeasibleEmbedding, ZeroReferenceVolume
from .simplex import contains, make_credal_polytope
from .volume import volume_fixed_dim

GRID_POINTS = 33
SEARCH_TOL = 1e-8


@dataclass(frozen=True)
class EmbeddingSpec:
    """Affine map x -> V x + b from R^d_target to R^d_source, V with orthonormal rows."""

    V: np.ndarray
    b: np.ndarray

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.V.T + self.b

    def is_row_orthonormal(self, tol=1e-10):
        return bool(np.allclose(self.V @ self.V.T, np.eye(len(self.V)), atol=tol))


@dataclass(frozen=True)
class LiftResult:
    K: object
    spec: EmbeddingSpec
    gap: float
    target_volume: float
    lifted_volume: float
    params: tuple


def pad(P, d_target):
    """Isometric copy of P on the face of the d_target-simplex spanned by its first P.d labels."""
    V = np.zeros((P.n_vertices, d_target))
    V[:, : P.d] = P.vertices
    return make_credal_polytope(V)


def _cone(base_vertices, sigma, tau):
    """One lift step; ``base_vertices`` live on m labels, the result on m + 1."""
    m = base_vertices.shape[1]
    copy = np.hstack([base_vertices, np.zeros((len(base_vertices), 1))])
    c = copy.mean(axis=0)
    facet = np.eye(m + 1)[:m]
    widened = (1.0 - sigma) * c + sigma * facet
    base = np.vstack([copy, widened]) if sigma > 0 else copy
    base_centroid = make_credal_polytope(base).centroid
    apex = (1.0 - tau) * base_centroid + tau * np.eye(m + 1)[m]
    return make_credal_polytope(np.vstack([base, apex]))


def _step(base, target, k_next):
    """Best (sigma, tau) for one lift step: grid, then coordinate refinement."""
    def vol(sigma, tau):
        return volume_fixed_dim(_cone(base, sigma, tau), k_next)

    grid = np.linspace(0.0, 1.0, GRID_POINTS)
    best = None
    for s in grid:
        for t in grid:
            g = abs(vol(s, t) - target)
            if best is None or g < best[0] - 1e-15:
                best = (g, s, t)
    g, s, t = best

    for _ in range(50):
        if g <= SEARCH_TOL * 1e-3:
            break
        prev = g
        t = _refine(lambda x: vol(s, x) - target, t)
        s = _refine(lambda x: vol(x, t) - target, s)
        g = abs(vol(s, t) - target)
        if prev - g <= SEARCH_TOL * 1e-3:
            break
    return _cone(base, s, t), (float(s), float(t)), g


def _refine(f, x0):
    """Move x in [0, 1] to a root of f if one is bracketed, else to the better endpoint."""
    lo, hi = f(0.0), f(1.0)
    if lo == 0.0:
        return 0.0
    if lo * hi < 0:
        return brentq(f, 0.0, 1.0, xtol=1e-15)
    cands = [(abs(f(x)), x) for x in (x0, 0.0, 1.0)]
    return min(cands)[1]


def lift_probability_set(P, d_target, family="cone"):
    """Credal set on ``d_target`` labels whose (d_target-1)-volume best matches P's volume.

    The target is P's (d'-1)-volume, d' = P.d.  Returns a LiftResult
    with the lifted polytope K, the embedding spec mapping the copy of
    P in K back onto P, and the absolute volume gap.
    """
    if family != "cone":
        raise ValueError(f"unknown lift family {family!r}")
    d_src = P.d
    if d_target < d_src:
        raise InfeasibleEmbedding(f"cannot lift from {d_src} down to {d_target} labels")
    target = volume_fixed_dim(P, d_src - 1) if d_src >= 2 else 0.0
    V = np.eye(d_target)[:d_src]
    spec = EmbeddingSpec(V, np.zeros(d_src))
    if d_target == d_src:
        return LiftResult(P, spec, 0.0, target, target, ())

    base = P.vertices
    params = []
    K = P
    for m in range(d_src, d_target):
        K, p, _ = _step(base, target, m)
        base = K.vertices
        params.append(p)
    lifted = volume_fixed_dim(K, d_target - 1)
    return LiftResult(K, spec, abs(lifted - target), target, lifted, tuple(params))


def relative_volume_variation(P_n, K):
    """|Vol(P_n) - Vol(K)| / Vol(P_n), both at the ambient dimension d - 1."""
    if P_n.d != K.d:
        raise ValueError("both sets must live on the same label space")
    k = P_n.d - 1
    ref = volume_fixed_dim(P_n, k)
    if ref <= 0.0:
        raise ZeroReferenceVolume("reference set has zero volume")
    return abs(ref - volume_fixed_dim(K, k)) / ref


def embedded_points(result, P):
    """Vertices of K that are copies of P's vertices, and their images under the spec."""
    K = result.K
    copies = np.zeros((P.n_vertices, K.d))
    copies[:, : P.d] = P.vertices
    return copies, result.spec(copies)


def lift_a3_counterexample(ell=0.5, height=0.1):
    """A nested pair Q in P whose lift escapes P.

    Q is a centered segment of chart length ``ell`` on two labels; P is a
    flat triangle on three labels with base the embedded copy of Q and
    apex at ``height`` toward the third vertex.  The lift of Q has area
    close to ``ell`` and cannot fit inside P (area ell*height/2).
    """
    a = 0.5 - ell / (2.0 * np.sqrt(2.0))
    Q = make_credal_polytope([(a, 1.0 - a), (1.0 - a, a)])
    base = pad(Q, 3).vertices
    m = base.mean(axis=0)
    w = (np.array([0.0, 0.0, 1.0]) - m) / np.linalg.norm(np.array([0.0, 0.0, 1.0]) - m)
    P = make_credal_polytope(np.vstack([base, m + height * w]))
    res = lift_probability_set(Q, 3)
    outside = [i for i, x in enumerate(res.K.vertices) if not contains(P, x)]
    return {
        "Q": Q, "P": P, "lift": res,
        "Q_in_P": all(contains(P, x) for x in base),
        "lift_in_P": not outside,
        "escaping_vertices": outside,
    }
