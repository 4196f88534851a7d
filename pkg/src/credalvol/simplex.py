"""Credal sets as finitely generated polytopes inside the probability simplex.

A credal set on ``d`` labels is stored by its extreme points (the
V-representation).  Everything metric is computed in an isometric chart
of the affine hull, so chart Lebesgue measure coincides with the
Hausdorff measure of the embedded set.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import (
    DimensionMismatch,
    EmptyInput,
    InvalidEvent,
    InvalidGrouping,
    InvalidProbabilityVector,
    InvalidScale,
)
from .geometry import distance_to_hull, nearest_point

TOL_SUM = 1e-9
TOL_DEDUPE = 1e-10
TOL_RANK = 1e-10
TOL_CONTAINS = 1e-9

# exact hull extraction is used up to this affine dimension
HULL_MAX_DIM = 8


def probability_vector(values, d=None):
    """Validate and normalize a probability vector.

    Entries down to ``-TOL_SUM`` are clamped to zero and the result is
    renormalized; anything further off raises InvalidProbabilityVector.
    """
    p = np.array(values, dtype=float).ravel()
    if d is not None and p.size != d:
        raise DimensionMismatch(f"expected {d} entries, got {p.size}")
    if p.size < 1:
        raise InvalidProbabilityVector("empty probability vector")
    if not np.all(np.isfinite(p)):
        raise InvalidProbabilityVector("non-finite entry")
    if p.min() < -TOL_SUM:
        raise InvalidProbabilityVector(f"negative entry {p.min():.3g}")
    if abs(p.sum() - 1.0) > TOL_SUM:
        raise InvalidProbabilityVector(f"entries sum to {p.sum():.17g}")
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    p.setflags(write=False)
    return p


@dataclass(frozen=True)
class Chart:
    """Isometric affine coordinates for a flat in R^d.

    ``basis`` has orthonormal rows; chart coordinates of ``x`` are
    ``basis @ (x - origin)``.
    """

    origin: np.ndarray
    basis: np.ndarray

    @property
    def k(self):
        return self.basis.shape[0]

    def to_chart(self, points):
        return (np.asarray(points, dtype=float) - self.origin) @ self.basis.T

    def from_chart(self, coords):
        coords = np.asarray(coords, dtype=float)
        return self.origin + coords @ self.basis


def chart_of_points(points):
    """Isometric chart of the affine hull of ``points`` (first point is the origin)."""
    P = np.asarray(points, dtype=float)
    origin = P[0].copy()
    D = P[1:] - origin
    if len(D) == 0:
        return Chart(origin, np.zeros((0, P.shape[1])))
    _, s, Wt = np.linalg.svd(D, full_matrices=False)
    rank = int(np.sum(s > TOL_RANK))
    return Chart(origin, Wt[:rank].copy())


def _dedupe(points):
    tree = cKDTree(points)
    drop = set()
    for i, j in sorted(tree.query_pairs(TOL_DEDUPE)):
        if i not in drop:
            drop.add(j)
    keep = [i for i in range(len(points)) if i not in drop]
    return points[keep]


def _lexsorted(points):
    order = np.lexsort(points.T[::-1])
    return points[order]


def _extreme_indices(points):
    chart = chart_of_points(points)
    k = chart.k
    if k == 0:
        return np.array([0])
    coords = chart.to_chart(points)
    if k == 1:
        return np.unique([int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))])
    if k <= HULL_MAX_DIM and len(points) > k + 1:
        try:
            return np.sort(ConvexHull(coords).vertices)
        except QhullError:
            pass
    if len(points) == k + 1:
        return np.arange(len(points))
    keep = []
    for i in range(len(points)):
        others = np.delete(points, i, axis=0)
        if distance_to_hull(others, points[i]) > TOL_CONTAINS:
            keep.append(i)
    return np.array(keep, dtype=int)


class CredalPolytope:
    """Convex hull of finitely many probability vectors on ``d`` labels.

    Build with :func:`make_credal_polytope`; the constructor assumes its
    input is already a deduplicated, canonically ordered set of extreme
    points.
    """

    __slots__ = ("vertices", "__dict__")

    def __init__(self, vertices):
        V = np.array(vertices, dtype=float)
        V.setflags(write=False)
        self.vertices = V

    @property
    def d(self):
        return self.vertices.shape[1]

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @cached_property
    def chart(self):
        return chart_of_points(self.vertices)

    @property
    def k(self):
        """Affine dimension."""
        return self.chart.k

    @cached_property
    def centroid(self):
        return self.vertices.mean(axis=0)

    @cached_property
    def coords(self):
        """Vertices in chart coordinates."""
        return self.chart.to_chart(self.vertices)

    @cached_property
    def halfspaces(self):
        """H-representation in chart coordinates: ``normals @ y + offsets <= 0``.

        Normals are unit vectors, so ``-(normals @ y + offsets)`` is the
        distance from an interior point ``y`` to each facet hyperplane.
        Only available for ``1 <= k <= HULL_MAX_DIM``.
        """
        k = self.k
        if k == 1:
            c = self.coords[:, 0]
            return np.array([[-1.0], [1.0]]), np.array([c.min(), -c.max()])
        if 2 <= k <= HULL_MAX_DIM:
            eq = self.hull.equations
            return np.ascontiguousarray(eq[:, :-1]), np.ascontiguousarray(eq[:, -1])
        raise ValueError(f"no H-representation for affine dimension {k}")

    @cached_property
    def hull(self):
        return ConvexHull(self.coords)

    def __len__(self):
        return self.n_vertices

    def __repr__(self):
        return f"CredalPolytope(d={self.d}, k={self.k}, n_vertices={self.n_vertices})"


def make_credal_polytope(points):
    """Credal polytope spanned by ``points`` (extreme points only, lexicographic order)."""
    pts = list(points) if not isinstance(points, np.ndarray) else points
    if len(pts) == 0:
        raise EmptyInput("need at least one point")
    d = len(pts[0])
    rows = []
    for p in pts:
        if len(p) != d:
            raise DimensionMismatch(f"point of length {len(p)} among length-{d} points")
        rows.append(probability_vector(p))
    P = _dedupe(np.array(rows))
    ext = P[_extreme_indices(P)]
    return CredalPolytope(_lexsorted(ext))


def simplex(d):
    """The vacuous credal set: the whole simplex on ``d`` labels."""
    return CredalPolytope(_lexsorted(np.eye(d)))


def singleton(p):
    return make_credal_polytope([p])


def affine_hull_chart(P):
    return P.chart


def contains(P, p, tol=TOL_CONTAINS):
    """Whether ``p`` lies within ``tol`` of P (nearest-point test)."""
    p = np.asarray(p, dtype=float).ravel()
    if p.size != P.d:
        raise DimensionMismatch(f"point has {p.size} entries, polytope has d={P.d}")
    return distance_to_point(P, p) <= tol


def distance_to_point(P, p):
    return nearest_point(P.vertices, p)[1]


def homothety(P, t, center=None):
    """Scale P by ``t`` in (0, 1] about its vertex centroid (or ``center``)."""
    if not (0.0 < t <= 1.0):
        raise InvalidScale(f"scale must lie in (0, 1], got {t}")
    if t == 1.0 and center is None:
        return P
    c = P.centroid if center is None else np.asarray(center, dtype=float)
    V = c + t * (P.vertices - c)
    return make_credal_polytope(V)


@dataclass(frozen=True)
class Event:
    """Subset of the label set {0, ..., d-1}, stored as a bitmask."""

    mask: int
    d: int

    def __post_init__(self):
        if self.d < 1 or self.mask < 0 or self.mask >= (1 << self.d):
            raise InvalidEvent(f"mask {self.mask} is not a subset of {self.d} labels")

    @classmethod
    def of(cls, labels, d):
        mask = 0
        for j in labels:
            if not 0 <= j < d:
                raise InvalidEvent(f"label {j} out of range for d={d}")
            mask |= 1 << j
        return cls(mask, d)

    def complement(self):
        return Event(((1 << self.d) - 1) ^ self.mask, self.d)

    @property
    def labels(self):
        return tuple(j for j in range(self.d) if self.mask >> j & 1)

    def indicator(self):
        return np.array([(self.mask >> j) & 1 for j in range(self.d)], dtype=float)

    def __len__(self):
        return bin(self.mask).count("1")


@dataclass(frozen=True)
class Grouping:
    """Identification of joint labels with pairs of factor labels.

    ``pairs[j] = (i1, i2)`` says joint label ``j`` is the pair of label
    ``i1`` of the first factor and label ``i2`` of the second.
    """

    pairs: tuple
    d1: int
    d2: int

    def __post_init__(self):
        pairs = tuple(tuple(int(x) for x in pr) for pr in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.d1 < 1 or self.d2 < 1 or not pairs:
            raise InvalidGrouping("factor sizes must be positive and pairs nonempty")
        if any(len(pr) != 2 for pr in pairs):
            raise InvalidGrouping("each joint label maps to exactly two factor labels")
        if any(not (0 <= a < self.d1 and 0 <= b < self.d2) for a, b in pairs):
            raise InvalidGrouping("factor label out of range")
        if len(set(pairs)) != len(pairs):
            raise InvalidGrouping("grouping is not injective")

    @property
    def d(self):
        return len(self.pairs)

    @classmethod
    def product(cls, d1, d2):
        """Full product space, joint index ``i1 * d2 + i2``."""
        return cls(tuple((a, b) for a in range(d1) for b in range(d2)), d1, d2)

    @classmethod
    def diagonal(cls):
        """Y = {(y1, y2), (y3, y4)} with y1 != y3 and y2 != y4."""
        return cls(((0, 0), (1, 1)), 2, 2)

    @classmethod
    def degenerate(cls, factor=0):
        """Y = {(y1, y2), (y3, y4)} with y1 = y3 (factor 0) or y2 = y4 (factor 1)."""
        if factor == 0:
            return cls(((0, 0), (0, 1)), 1, 2)
        return cls(((0, 0), (1, 0)), 2, 1)

    def degenerate_factors(self):
        """Factors on which every joint label agrees (Prop.-2 style instances)."""
        return tuple(
            f for f in (0, 1) if len({pr[f] for pr in self.pairs}) == 1
        )

    def marginal_matrix(self, which):
        size = self.d1 if which == 0 else self.d2
        M = np.zeros((size, self.d))
        for j, pr in enumerate(self.pairs):
            M[pr[which], j] = 1.0
        return M


_FACTORS = {0: 0, 1: 1, "first": 0, "second": 1}


def _factor_index(which):
    try:
        return _FACTORS[which]
    except (KeyError, TypeError):
        raise InvalidGrouping(f"unknown factor selector {which!r}") from None


def marginalize(P, g, which=0):
    """Marginal credal set of P on factor ``which`` (0 or 1) of grouping ``g``."""
    f = _factor_index(which)
    if g.d != P.d:
        raise InvalidGrouping(f"grouping covers {g.d} joint labels, polytope has {P.d}")
    M = g.marginal_matrix(f)
    return make_credal_polytope(P.vertices @ M.T)


def strong_product(P1, P2):
    """Strong extension: hull of all products of extreme points (joint index i1*d2+i2)."""
    prods = [np.outer(p, q).ravel() for p in P1.vertices for q in P2.vertices]
    return make_credal_polytope(prods)
