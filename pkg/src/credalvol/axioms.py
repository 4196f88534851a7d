"""Executable checks of the uncertainty-measure axioms and their counterexamples.

Axiom ids: A1 boundedness, A2 continuity, A3 monotonicity, A4'
probability consistency, A5 sub-additivity, A6 additivity, A7
rotation/translation invariance.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import BaseTooLong, InvalidHeight, NotNested
from .measures import generalized_hartley, imprecision_width, max_entropy
from .packing import hausdorff_distance
from .simplex import contains, make_credal_polytope, marginalize
from .volume import simplex_volume, volume_fixed_dim

MEASURES = ("volume", "maxent", "gh")

SIMPLEX_EDGE = math.sqrt(2.0)
SIMPLEX_HEIGHT_3 = math.sqrt(6.0) / 2.0

HAUSDORFF_NOTE = "continuity judged along sequences converging in the Hausdorff metric"


@dataclass(frozen=True)
class AxiomConfig:
    tol: float = 1e-12
    invariance_tol: float = 1e-10
    width_eps: float = 1e-3
    u_eps: float = 1e-3
    # "reference": compare volumes at a common dimension (P's affine
    # dimension for A3, the largest one in a sequence); "adaptive": each
    # set at its own affine dimension (full-dimensionality convention)
    convention: str = "reference"
    n_isometries: int = 3
    seed: int = 0


@dataclass
class AxiomReport:
    axiom: str
    verdict: str
    witness: dict = field(default_factory=dict)
    tolerance: float = 0.0
    note: str = ""

    @property
    def passed(self):
        return self.verdict == "pass"

    def as_dict(self):
        return asdict(self)


def _verdict(ok):
    return "pass" if ok else "fail"


def measure_value(P, measure="volume", k=None):
    """Value of ``measure`` on P; volumes are taken at dimension ``k`` (default: P's own)."""
    if measure == "volume":
        return volume_fixed_dim(P, P.k if k is None else k)
    if measure == "maxent":
        return max_entropy(P)
    if measure == "gh":
        return generalized_hartley(P, warn=False)
    raise ValueError(f"unknown measure {measure!r}; choose from {MEASURES}")


def measure_bound(d, measure="volume"):
    if measure == "volume":
        return simplex_volume(d) if d >= 2 else 0.0
    return math.log2(d)


def _simplex_plane_basis(d):
    """Orthonormal rows spanning {x : sum(x) = 0}."""
    M = np.eye(d) - 1.0 / d
    U, s, _ = np.linalg.svd(M)
    return U[:, : d - 1].T


def random_isometric_copy(P, rng):
    """Image of P under a random label permutation, in-plane rotation and translation.

    Rotation angles and translation lengths are shrunk until the image
    stays inside the simplex; the map is an isometry of the simplex's
    affine hull either way.
    """
    d = P.d
    V = P.vertices[:, rng.permutation(d)]
    kinds = ["permutation"]
    if d >= 3:
        H = _simplex_plane_basis(d)
        c = V.mean(axis=0)
        A = rng.normal(size=(d - 1, d - 1))
        S = (A - A.T) / np.linalg.norm(A - A.T)
        angle = rng.uniform(0.1, math.pi)
        for _ in range(40):
            R = expm(angle * S)
            W = c + ((V - c) @ H.T @ R.T) @ H
            if W.min() >= 0.0:
                V = W
                kinds.append(f"rotation({angle:.3g})")
                break
            angle *= 0.5
    if d >= 2:
        H = _simplex_plane_basis(d)
        delta = rng.normal(size=d - 1) @ H
        neg = delta < 0
        alpha_max = float(np.min(V[:, neg] / -delta[neg])) if np.any(neg) else 0.0
        alpha = rng.uniform(0.0, alpha_max)
        if alpha > 0:
            V = V + alpha * delta
            kinds.append("translation")
    V = np.clip(V, 0.0, None)
    return make_credal_polytope(V / V.sum(axis=1, keepdims=True)), kinds


def check_axioms(P, Q=None, measure="volume", config=None):
    """A1, A3 and A7 reports for ``measure`` on P (A3 needs a nested Q)."""
    cfg = config or AxiomConfig()
    reports = []

    u = measure_value(P, measure)
    bound = measure_bound(P.d, measure)
    witness = {"value": u, "bound": bound}
    if measure == "volume":
        # the bound is a (d-1)-volume; the adaptive convention compares P's own
        # k-volume against it anyway, which can fail for thin sets
        k1 = P.d - 1 if cfg.convention == "reference" else P.k
        witness = {"value": volume_fixed_dim(P, k1) if P.d >= 2 else 0.0, "bound": bound,
                   "dim": k1}
    reports.append(AxiomReport(
        "A1", _verdict(-cfg.tol <= witness["value"] <= bound + cfg.tol), witness, cfg.tol,
        f"volume convention: {cfg.convention}" if measure == "volume" else "",
    ))

    if Q is None:
        reports.append(AxiomReport("A3", "not-applicable", {}, cfg.tol, "no nested set given"))
    else:
        if Q.d != P.d or not all(contains(P, q) for q in Q.vertices):
            raise NotNested("Q is not contained in P")
        if measure == "volume" and cfg.convention == "reference":
            uq, up, dims = volume_fixed_dim(Q, P.k), u, (P.k, P.k)
        elif measure == "volume":
            uq, up, dims = volume_fixed_dim(Q, Q.k), u, (P.k, Q.k)
        else:
            uq, up, dims = measure_value(Q, measure), u, None
        witness = {"U(P)": up, "U(Q)": uq}
        if dims is not None:
            witness["dims"] = {"P": dims[0], "Q": dims[1]}
        reports.append(AxiomReport(
            "A3", _verdict(uq <= up + cfg.tol), witness, cfg.tol,
            f"volume convention: {cfg.convention}" if measure == "volume" else "",
        ))

    rng = np.random.default_rng(cfg.seed)
    values, kinds = [], []
    for _ in range(cfg.n_isometries):
        image, kind = random_isometric_copy(P, rng)
        values.append(measure_value(image, measure))
        kinds.append(kind)
    dev = max((abs(v - u) for v in values), default=0.0)
    reports.append(AxiomReport(
        "A7", _verdict(dev <= cfg.invariance_tol),
        {"U(P)": u, "U(images)": values, "transforms": kinds, "max_deviation": dev},
        cfg.invariance_tol,
    ))
    return reports


def _sequence_values(seq, measure, convention):
    if measure == "volume":
        if convention == "adaptive":
            return [volume_fixed_dim(P, P.k) for P in seq]
        k = max(P.k for P in seq)
        return [volume_fixed_dim(P, k) for P in seq]
    return [measure_value(P, measure) for P in seq]


def check_probability_consistency(seq, measure="volume", config=None):
    """A4': as the imprecision width vanishes, U must vanish, without rebounds.

    Passes iff (final width < width_eps implies final U < u_eps) and the
    U sequence never increases again once it has started to decrease.
    """
    cfg = config or AxiomConfig()
    seq = list(seq)
    if len(seq) < 3:
        raise ValueError("need a sequence of at least 3 credal sets")
    if len({P.d for P in seq}) != 1:
        raise ValueError("all sets in the sequence must share d")
    widths = [imprecision_width(P) for P in seq]
    values = _sequence_values(seq, measure, cfg.convention)

    width_vanishes = widths[-1] < cfg.width_eps
    u_vanishes = values[-1] < cfg.u_eps
    consistent = u_vanishes or not width_vanishes
    rebound_at = None
    decreasing = False
    for i in range(1, len(values)):
        step = values[i] - values[i - 1]
        if step < -cfg.tol:
            decreasing = True
        elif step > cfg.tol and decreasing:
            rebound_at = i
            break
    ok = consistent and rebound_at is None
    return AxiomReport(
        "A4'", _verdict(ok),
        {
            "widths": widths, "values": values,
            "width_vanishes": width_vanishes, "u_vanishes": u_vanishes,
            "rebound_index": rebound_at,
        },
        cfg.u_eps,
        f"volume convention: {cfg.convention}; {HAUSDORFF_NOTE}",
    )


def check_continuity(seq, limit, measure="volume", config=None):
    """A2 along ``seq`` converging to ``limit`` in the Hausdorff metric.

    Fails when the element closest to the limit has U off from U(limit)
    by more than ``u_eps`` and either (a) it lies within ``width_eps`` of
    the limit, or (b) the Hausdorff distance shrank at least tenfold
    along the sequence while the U gap did not even halve.
    """
    cfg = config or AxiomConfig()
    seq = list(seq)
    values = _sequence_values(seq + [limit], measure, cfg.convention)
    dists = [hausdorff_distance(P, limit) for P in seq]
    i = int(np.argmin(dists))
    j = int(np.argmax(dists))
    jumps = [abs(v - values[-1]) for v in values[:-1]]
    close = dists[i] <= cfg.width_eps
    stalled = dists[i] <= 0.1 * dists[j] and jumps[i] > 0.5 * jumps[j]
    ok = not (jumps[i] > cfg.u_eps and (close or stalled))
    return AxiomReport(
        "A2", _verdict(ok),
        {
            "hausdorff_to_limit": dists, "values": values[:-1], "limit_value": values[-1],
            "closest_index": i, "jump": jumps[i], "first_jump": jumps[j],
        },
        cfg.u_eps,
        f"volume convention: {cfg.convention}; {HAUSDORFF_NOTE}",
    )


SI_INSTANCES = {0: "y1=y3", 1: "y2=y4"}


def check_subadditivity(P, g, measure="volume", tol=1e-10):
    """A5 and A6 reports for P and its marginals under grouping ``g``.

    Volumes are taken at each set's own affine dimension.
    """
    Pm1 = marginalize(P, g, 0)
    Pm2 = marginalize(P, g, 1)
    u, u1, u2 = (measure_value(X, measure) for X in (P, Pm1, Pm2))
    total = u1 + u2
    si = [SI_INSTANCES[f] for f in g.degenerate_factors()]
    witness = {"U(P)": u, "U(P1)": u1, "U(P2)": u2, "sum": total,
               "strict": total > u + tol, "si_instance": si or None}
    return [
        AxiomReport("A5", _verdict(u <= total + tol), dict(witness), tol),
        AxiomReport("A6", _verdict(abs(u - total) <= tol), dict(witness), tol),
    ]


def _edge_frame():
    """Midpoint of the e1-e2 edge of the 3-label simplex, unit edge direction, unit direction to e3."""
    m = np.array([0.5, 0.5, 0.0])
    u = np.array([-1.0, 1.0, 0.0]) / SIMPLEX_EDGE
    w = (np.array([0.0, 0.0, 1.0]) - m) / SIMPLEX_HEIGHT_3
    return m, u, w


def base_segment(b):
    """Segment of length ``b`` centered on the e1-e2 edge."""
    if not 0.0 < b <= SIMPLEX_EDGE:
        raise BaseTooLong(f"base {b} does not fit on a simplex edge of length sqrt(2)")
    m, u, _ = _edge_frame()
    return make_credal_polytope([m - 0.5 * b * u, m + 0.5 * b * u])


def base_triangle(b, h):
    """Triangle with base ``b`` on the e1-e2 edge and apex at height ``h`` toward e3."""
    if not 0.0 < h <= SIMPLEX_HEIGHT_3:
        raise InvalidHeight(f"height {h} outside (0, sqrt(6)/2]")
    seg = base_segment(b)
    m, _, w = _edge_frame()
    return make_credal_polytope(np.vstack([seg.vertices, m + h * w]))


def vanishing_height_sequence(b, n_max):
    """Triangles of base ``b`` and heights 1/n (n = 1..n_max), and their limiting segment."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    seg = base_segment(b)
    return [base_triangle(b, 1.0 / n) for n in range(1, n_max + 1)], seg


def continuity_counterexample(b, n_max, h=1.0):
    """Tables for the vanishing-height triangles and the full-dimensional A3 failure."""
    tris, seg = vanishing_height_sequence(b, n_max)
    rows = []
    for n, T in enumerate(tris, start=1):
        rows.append({"n": n, "h": 1.0 / n, "vol2": volume_fixed_dim(T, 2),
                     "vol1": None, "width": imprecision_width(T)})
    limit = {"n": "inf", "h": 0.0, "vol2": volume_fixed_dim(seg, 2),
             "vol1": volume_fixed_dim(seg, 1), "width": imprecision_width(seg)}

    P = base_triangle(b, h)
    cfg = AxiomConfig(convention="adaptive")
    a3 = check_axioms(P, seg, "volume", cfg)[1]
    a3_pair = {"b": b, "h": h, "vol2_P": volume_fixed_dim(P, 2),
               "vol1_Q": volume_fixed_dim(seg, 1), "report": a3}
    return {"rows": rows, "limit": limit, "a3_pair": a3_pair}
