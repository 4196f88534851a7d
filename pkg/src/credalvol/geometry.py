"""Nearest-point queries against convex hulls of finite point sets.

The solver is Wolfe's minimum-norm-point algorithm: it maintains a
corral of affinely independent points, alternates between adding the
most violating point and projecting onto the affine hull of the corral,
and drops points whose barycentric weight turns nonpositive.  It
terminates in finitely many steps and returns the nearest point to
machine precision, which the membership and Hausdorff routines rely on.
"""

import numpy as np

from .errors import NumericalFailure

_WEIGHT_EPS = 1e-14


def _affine_minimizer(Y):
    """Barycentric weights of the minimum-norm point of aff(Y)."""
    m = len(Y)
    if m == 1:
        return np.ones(1)
    G = Y @ Y.T
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = G
    kkt[:m, m] = 1.0
    kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    mu = sol[:m]
    return mu / mu.sum()


def min_norm_point(Y, max_iter=10_000):
    """Minimum-norm point of conv(rows of Y).

    Returns ``(x, support, weights)`` where ``x = weights @ Y[support]``.
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or len(Y) == 0:
        raise ValueError("need a nonempty 2-D point array")
    norms2 = np.einsum("ij,ij->i", Y, Y)
    scale = max(float(norms2.max()), 1.0)
    j0 = int(np.argmin(norms2))
    S = [j0]
    lam = np.ones(1)
    x = Y[j0].copy()
    best = (x, list(S), lam)

    for _ in range(max_iter):
        dots = Y @ x
        j = int(np.argmin(dots))
        if float(x @ x) - dots[j] <= 1e-15 * scale or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        for _minor in range(len(Y) + 2):
            mu = _affine_minimizer(Y[S])
            if np.all(mu > _WEIGHT_EPS):
                lam = mu
                break
            neg = (mu <= _WEIGHT_EPS) & (lam - mu > 0)
            if not np.any(neg):
                lam = np.clip(mu, 0.0, None)
            else:
                theta = float(np.min(lam[neg] / (lam[neg] - mu[neg])))
                lam = lam + theta * (mu - lam)
            keep = lam > _WEIGHT_EPS
            if not np.any(keep):
                keep[int(np.argmax(lam))] = True
            S = [s for s, kp in zip(S, keep) if kp]
            lam = lam[keep] / lam[keep].sum()
        x = lam @ Y[S]
        # the norm drops strictly on every major step in exact arithmetic, so a
        # step without progress means rounding has stalled the corral
        if float(x @ x) >= float(best[0] @ best[0]):
            x, S, lam = best
            break
        best = (x, list(S), lam)
    else:
        raise NumericalFailure("min-norm-point iteration limit reached")
    return x, np.array(S, dtype=int), lam


def nearest_point(vertices, p):
    """Nearest point of conv(vertices) to ``p`` and the distance to it."""
    V = np.asarray(vertices, dtype=float)
    p = np.asarray(p, dtype=float)
    x, _, _ = min_norm_point(V - p)
    return x + p, float(np.linalg.norm(x))


def distance_to_hull(vertices, p):
    return nearest_point(vertices, p)[1]
