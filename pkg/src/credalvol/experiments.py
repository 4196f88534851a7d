"""Experiment drivers: IDM learning curves and credal-prior shrinkage."""

import math
from dataclasses import astuple, dataclass, field

import numpy as np

from .errors import EpsilonTooLarge, InvalidHyperparameter
from .measures import imprecision_width, max_entropy
from .packing import erode, hausdorff_distance
from .simplex import HULL_MAX_DIM, make_credal_polytope, probability_vector, simplex
from .volume import simplex_volume, volume_fixed_dim

CURVE_HEADER = ("n", "volume", "width", "max_entropy", "dh_prev")


@dataclass
class IdmState:
    """Label counts and prior strength of an Imprecise Dirichlet Model."""

    counts: np.ndarray
    s: float = 1.0
    n: int = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or len(counts) < 2:
            raise ValueError("need counts for at least 2 labels")
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        if not (self.s > 0 and math.isfinite(self.s)):
            raise InvalidHyperparameter(f"prior strength s must be positive, got {self.s}")
        self.counts = counts
        self.n = int(counts.sum())

    @property
    def d(self):
        return len(self.counts)

    def observe(self, label):
        self.counts[label] += 1
        self.n += 1

    @property
    def scale(self):
        """Homothety factor s/(n+s) of the IDM set relative to the simplex."""
        return self.s / (self.n + self.s)


def idm_vertices(state):
    """Vertex j has probabilities (counts + s e_j) / (n + s)."""
    return (state.counts[None, :] + state.s * np.eye(state.d)) / (state.n + state.s)


def idm_credal_set(state):
    """Posterior credal set of the IDM; the full simplex when no data has been seen."""
    if not state.s > 0:
        raise InvalidHyperparameter(f"prior strength s must be positive, got {state.s}")
    if state.n == 0:
        return simplex(state.d)
    return make_credal_polytope(idm_vertices(state))


def idm_volume(state):
    """Closed-form volume (s/(n+s))^(d-1) times the simplex volume."""
    return state.scale ** (state.d - 1) * simplex_volume(state.d)


@dataclass(frozen=True)
class CurveRow:
    n: int
    volume: float
    width: float
    max_entropy: float
    dh_prev: float

    def as_tuple(self):
        return astuple(self)


def idm_curve(p_true, n_max, s=1.0, seed=0, exact=True):
    """Epistemic-uncertainty curve of the IDM fed i.i.d. draws from ``p_true``.

    One row per n = 0..n_max.  Volumes are exact hull volumes when
    ``exact`` and the dimension allows, the closed form otherwise.
    """
    p = probability_vector(p_true)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(p), size=n_max, p=p)
    state = IdmState(np.zeros(len(p), dtype=np.int64), s)
    use_hull = exact and state.d - 1 <= HULL_MAX_DIM
    rows = []
    prev = None
    for n in range(n_max + 1):
        if n > 0:
            state.observe(draws[n - 1])
        P = idm_credal_set(state)
        vol = volume_fixed_dim(P, state.d - 1) if use_hull else idm_volume(state)
        dh = 0.0 if prev is None else hausdorff_distance(prev, P)
        rows.append(CurveRow(n, vol, imprecision_width(P), max_entropy(P), dh))
        prev = P
    return rows


def prior_shrinkage_ratio(c, eps):
    """Vol of the eps-eroded simplex on c labels over the simplex volume.

    The erosion is the centroid homothety at Hausdorff distance eps, so
    the ratio is (1 - eps/R)^(c-1) with R the circumradius sqrt((c-1)/c).
    """
    if c < 2:
        raise ValueError("need at least 2 labels")
    R = math.sqrt((c - 1) / c)
    if not 0 < eps < R:
        raise EpsilonTooLarge(f"eps must lie in (0, {R:.6g}) for c = {c}")
    return (1.0 - eps / R) ** (c - 1)


def prior_shrinkage(eps, c_values, exact_max=6):
    """Rows (c, ratio, closed_form) for each label count; exact hull volume up to ``exact_max``."""
    rows = []
    for c in c_values:
        closed = prior_shrinkage_ratio(c, eps)
        if c <= exact_max:
            D = simplex(c)
            ratio = volume_fixed_dim(erode(D, eps), c - 1) / simplex_volume(c)
        else:
            ratio = closed
        rows.append({"c": c, "eps": eps, "ratio": ratio, "closed_form": closed})
    return rows

