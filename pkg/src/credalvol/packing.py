"""Packings, Hausdorff distance, boundary-concentration experiments.

Balls live in the isometric chart of a credal polytope, so a ball of
radius r is a k-dimensional ball inside the affine hull of the set.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import ConvexHull, QhullError, cKDTree

from . import kernels
from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    EpsilonTooLarge,
    InvalidRadii,
    UnknownDimension,
)
from .simplex import HULL_MAX_DIM, distance_to_point, homothety, simplex
from .volume import ball_volume, chunk_rng, volume, volume_exact

DEFAULT_RESTARTS = 16
DEFAULT_MAX_CANDIDATES = 200_000
# tangency tolerance for ball containment and ball separation
TOL_PACK = 1e-12


def hausdorff_distance(P, Q):
    """Hausdorff distance between two credal polytopes.

    Distance to a convex set is a convex function, so each one-sided
    maximum is attained at a vertex.
    """
    if P.d != Q.d:
        raise DimensionMismatch(f"d={P.d} vs d={Q.d}")
    a = max(distance_to_point(Q, p) for p in P.vertices)
    b = max(distance_to_point(P, q) for q in Q.vertices)
    return float(max(a, b))


def circumradius(P):
    """Largest vertex distance to the vertex centroid."""
    return float(np.linalg.norm(P.vertices - P.centroid, axis=1).max())


def erode(P, eps):
    """Homothetic copy Q of P (about its centroid) with d_H(P, Q) = eps.

    The scale 1 - eps/R is exact for sets whose farthest vertices see
    their shrunk images as nearest points (regular simplices, IDM sets);
    otherwise the scale is solved for by root finding on the Hausdorff
    distance, which is monotone in the scale.
    """
    R = circumradius(P)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if eps >= R:
        raise EpsilonTooLarge(f"eps={eps} >= circumradius {R}")
    t0 = 1.0 - eps / R
    Q = homothety(P, t0)
    if abs(hausdorff_distance(P, Q) - eps) <= 1e-12:
        return Q

    def gap(t):
        return hausdorff_distance(P, homothety(P, t)) - eps

    t = brentq(gap, 1e-9, t0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return homothety(P, t)


def erosion_scale(P, Q):
    """Homothety factor relating Q to P, read off the vertex spreads."""
    return circumradius(Q) / circumradius(P)


def _hrep(coords):
    """Unit-normal H-representation of conv(coords), full-dimensional in R^k."""
    k = coords.shape[1]
    if k == 1:
        c = coords[:, 0]
        return np.array([[-1.0], [1.0]]), np.array([c.min(), -c.max()])
    eq = ConvexHull(coords).equations
    return np.ascontiguousarray(eq[:, :-1]), np.ascontiguousarray(eq[:, -1])


@dataclass
class PackingResult:
    radius: float
    centers: np.ndarray
    count: int
    restarts: int
    pitch: float
    candidates: np.ndarray
    certificate: dict = field(default_factory=dict)
    k: int = 0

    def as_dict(self):
        return {
            "radius": self.radius, "count": self.count, "restarts": self.restarts,
            "pitch": self.pitch, "k": self.k, "certificate": dict(self.certificate),
            "centers": self.centers.tolist(),
        }


def _axis(lo, hi, pitch):
    pts = lo + pitch * np.arange(int(np.floor((hi - lo) / pitch)) + 1)
    if hi - pts[-1] > 1e-12:
        pts = np.append(pts, hi)
    return pts


def _grid(lo, hi, pitch, max_candidates):
    """Grid anchored at ``lo`` with spacing ``pitch``, closed off by ``hi`` on every axis.

    The pitch is coarsened until the grid has at most ``max_candidates``
    points.
    """
    k = len(lo)
    hi = np.maximum(hi, lo)
    while True:
        axes = [_axis(lo[j], hi[j], pitch) for j in range(k)]
        total = float(np.prod([len(a) for a in axes]))
        if total <= max_candidates:
            break
        pitch *= (total / max_candidates) ** (1.0 / k) * 1.0001
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), pitch


class _Region:
    """Centers x with B(x, r) inside P and, optionally, outside Q (all in P's chart)."""

    def __init__(self, P, exclude=None):
        self.P = P
        self.normals, self.offsets = P.halfspaces
        self.exclude = None
        if exclude is not None:
            qc = P.chart.to_chart(exclude.vertices)
            try:
                if np.linalg.matrix_rank(qc - qc[0], tol=1e-10) < P.k:
                    raise QhullError("lower-dimensional exclusion set")
                self.exclude = ("hrep",) + _hrep(qc)
            except QhullError:
                self.exclude = ("nearest", exclude)

    def clearance(self, X):
        """Distance from each chart point to the boundary of P (negative outside)."""
        return kernels.min_slack(X, self.normals, self.offsets)

    def exclusion_distance(self, X):
        """Lower bound on the distance from each chart point to Q."""
        if self.exclude is None:
            return np.full(len(X), np.inf)
        if self.exclude[0] == "hrep":
            return -kernels.min_slack(X, self.exclude[1], self.exclude[2])
        Q = self.exclude[1]
        return np.array([distance_to_point(Q, x) for x in self.P.chart.from_chart(X)])

    def feasible(self, X, r):
        return ((self.clearance(X) >= r - TOL_PACK)
                & (self.exclusion_distance(X) >= r - TOL_PACK))


def greedy_packing(P, r, seed=0, restarts=DEFAULT_RESTARTS, exclude=None, pitch=None,
                   max_candidates=DEFAULT_MAX_CANDIDATES):
    """Greedy maximal r-packing of P (optionally of P minus ``exclude``).

    Candidates form a grid of pitch r/4 (coarsened to at most
    ``max_candidates`` points) jittered by up to r/8 per coordinate.
    Restart 0 scans the unjittered grid in lexicographic order, later
    restarts use random jitter and order; the largest packing wins.
    The count is a lower bound on the packing number, and maximality is
    certified against the winning restart's candidate set.
    """
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    k = P.k
    if k > HULL_MAX_DIM:
        raise DimensionTooLarge(f"packing needs affine dimension <= {HULL_MAX_DIM}, got {k}")
    empty = np.zeros((0, k))
    if k == 0:
        return PackingResult(r, empty, 0, restarts, 0.0, empty,
                             {"maximal": True, "uncovered": 0}, k)
    region = _Region(P, exclude)
    X = P.coords
    lo, hi = X.min(axis=0) + r, X.max(axis=0) - r
    if np.any(hi < lo):
        return PackingResult(r, empty, 0, restarts, r / 4, empty,
                             _certificate(region, empty, empty, r), k)
    base, used_pitch = _grid(lo, hi, pitch or r / 4.0, max_candidates)

    best = None
    for i in range(max(1, restarts)):
        if i == 0:
            cand = base
            order = np.arange(len(cand))
        else:
            rng = chunk_rng(seed, i)
            cand = base + rng.uniform(-r / 8.0, r / 8.0, size=base.shape)
            order = None
        feas = region.feasible(cand, r)
        cand = cand[feas]
        if order is None:
            order = rng.permutation(len(cand))
        else:
            order = np.arange(len(cand))
        if len(cand):
            chosen = kernels.greedy_select(cand, order, 2.0 * r - TOL_PACK)
        else:
            chosen = np.zeros(0, dtype=int)
        if best is None or len(chosen) > len(best[0]):
            best = (cand[chosen], cand)
    centers, cand = best
    return PackingResult(r, centers, len(centers), restarts, used_pitch, cand,
                         _certificate(region, centers, cand, r), k)


def _certificate(region, centers, cand, r):
    cert = {}
    if len(centers):
        clear = region.clearance(centers) - r
        excl = region.exclusion_distance(centers) - r
        cert["clearance_margin"] = float(min(clear.min(), excl.min()))
    else:
        cert["clearance_margin"] = math.inf
    if len(centers) > 1:
        dists, _ = cKDTree(centers).query(centers, k=2)
        cert["min_separation"] = float(dists[:, 1].min())
        cert["separation_margin"] = float(dists[:, 1].min() - 2.0 * r)
    else:
        cert["min_separation"] = math.inf
        cert["separation_margin"] = math.inf
    if len(cand) and len(centers):
        near, _ = cKDTree(centers).query(cand, k=1)
        uncovered = int(np.count_nonzero(near >= 2.0 * r - TOL_PACK))
    else:
        uncovered = len(cand)
    cert["uncovered"] = uncovered
    cert["maximal"] = uncovered == 0
    return cert


def packing_ratio(count, k, r, vol):
    """Estimated packing constant: volume of the packed balls over the set volume."""
    if vol <= 0:
        return math.nan
    return count * ball_volume(k, r) / vol


@dataclass
class Theorem1Report:
    d: int
    eps: float
    r: float
    vol_P: float
    vol_Q: float
    vol_Qprime: float
    lhs: float
    ratio_Q: float
    ratio_Qprime: float
    rhs: float
    n_pack_P: int
    n_pack_Qprime: int
    condition_c: bool
    c_hat_P: float
    c_hat_Qprime: float
    identity_holds: bool
    inequality_holds: object
    erosion_scale: float
    volume_method: str
    flags: list = field(default_factory=list)

    def as_dict(self):
        return asdict(self)


def boundary_bound(d, eps, r):
    """Right-hand side 1 - (1 - eps/r)^d of the boundary-concentration inequality."""
    return 1.0 - (1.0 - eps / r) ** d


def theorem1_experiment(d, eps, r, base="simplex", scale=1.0, seed=0,
                        restarts=DEFAULT_RESTARTS, pitch=None,
                        max_candidates=DEFAULT_MAX_CANDIDATES, samples=200_000):
    """Run the boundary-concentration experiment on the simplex (or a homothety of it).

    Q is the eps-erosion of P and Q' = P minus Q.  Packing numbers are
    greedy estimates, so condition (c) is reported as a certificate on
    estimates only, and the inequality verdict is evaluated only when
    that certificate holds.
    """
    if not 0 < eps < r:
        raise InvalidRadii(f"need 0 < eps < r, got eps={eps}, r={r}")
    if base != "simplex":
        raise ValueError(f"unknown base polytope {base!r}")
    P = simplex(d) if scale == 1.0 else homothety(simplex(d), scale)
    Q = erode(P, eps)

    exact = P.k <= HULL_MAX_DIM
    vol_p = volume_exact(P).value if exact else volume(P, samples, seed).value
    vol_q = volume_exact(Q).value if exact else volume(Q, samples, seed).value
    vol_qp = vol_p - vol_q
    identity = abs(vol_q + vol_qp - vol_p) <= 1e-10

    lhs = (vol_p - vol_qp) / vol_p
    rhs = boundary_bound(d, eps, r)
    pack_p = greedy_packing(P, r, seed, restarts, pitch=pitch, max_candidates=max_candidates)
    pack_qp = greedy_packing(P, r - eps, seed, restarts, exclude=Q, pitch=pitch,
                             max_candidates=max_candidates)
    cond_c = pack_p.count >= pack_qp.count
    ineq = (lhs >= rhs) if cond_c else None

    flags = ["packing-numbers-estimated"]
    if not exact:
        flags.append("volumes-monte-carlo")
    if not cond_c:
        flags.append("condition-c-not-certified")
    if lhs < rhs:
        flags.append("literal-inequality-fails")
    if pack_p.count == 0:
        flags.append("no-ball-fits")
    return Theorem1Report(
        d=d, eps=eps, r=r, vol_P=vol_p, vol_Q=vol_q, vol_Qprime=vol_qp,
        lhs=lhs, ratio_Q=vol_q / vol_p, ratio_Qprime=vol_qp / vol_p, rhs=rhs,
        n_pack_P=pack_p.count, n_pack_Qprime=pack_qp.count, condition_c=cond_c,
        c_hat_P=packing_ratio(pack_p.count, P.k, r, vol_p),
        c_hat_Qprime=packing_ratio(pack_qp.count, P.k, r - eps, vol_qp),
        identity_holds=identity, inequality_holds=ineq,
        erosion_scale=erosion_scale(P, Q),
        volume_method="exact" if exact else "monte-carlo", flags=flags,
    )


DEFAULT_SWEEP_D = (2, 3, 4, 5)
DEFAULT_SWEEP_RATIOS = (0.1, 0.25, 0.5)
DEFAULT_SWEEP_R = 0.1


def theorem1_sweep(ds=DEFAULT_SWEEP_D, ratios=DEFAULT_SWEEP_RATIOS, r=DEFAULT_SWEEP_R,
                   **kwargs):
    return [theorem1_experiment(d, q * r, r, **kwargs) for d in ds for q in ratios]


_C_STAR = {
    1: 1.0,
    2: math.pi / math.sqrt(12.0),
    3: math.pi / math.sqrt(18.0),
    8: math.pi**4 / 384.0,
    24: math.pi**12 / math.factorial(12),
}


def c_star(d):
    """Optimal sphere-packing density of R^d, for the dimensions where it is known."""
    try:
        return _C_STAR[d]
    except KeyError:
        raise UnknownDimension(
            f"optimal packing density is only known for d in {sorted(_C_STAR)}"
        ) from None


@dataclass
class CarlPajorReport:
    d: int
    m: int
    samples: int
    seed: int
    bound: float
    ratio: float
    stderr: float
    holds: bool

    def as_dict(self):
        return asdict(self)


def carl_pajor_bound(d, m):
    """(4 sqrt(ln m / d))^d, natural logarithm."""
    return (4.0 * math.sqrt(math.log(m) / d)) ** d


def carl_pajor_experiment(d, m, samples=100_000, seed=0, chunk_size=1 << 16):
    """Volume fraction of the unit d-ball covered by the hull of m random unit vectors."""
    if d < 1 or m < 1 or samples < 1:
        raise ValueError("need d >= 1, m >= 1, samples >= 1")
    rng = chunk_rng(seed, 0)
    pts = rng.normal(size=(m, d))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    bound = carl_pajor_bound(d, m)
    full = m >= d + 1 and np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-10) == d
    if not full:
        return CarlPajorReport(d, m, samples, seed, bound, 0.0, 0.0, 0.0 <= bound)
    normals, offsets = _hrep(pts)
    hits = 0
    for i, start in enumerate(range(0, samples, chunk_size)):
        n = min(chunk_size, samples - start)
        g = chunk_rng(seed, i + 1)
        x = g.normal(size=(n, d))
        x *= (g.random(n) ** (1.0 / d) / np.linalg.norm(x, axis=1))[:, None]
        hits += kernels.count_inside(x, normals, offsets, 0.0)
    ratio = hits / samples
    stderr = math.sqrt(ratio * (1.0 - ratio) / samples)
    return CarlPajorReport(d, m, samples, seed, bound, ratio, stderr,
                           ratio <= bound + 3.0 * stderr)
