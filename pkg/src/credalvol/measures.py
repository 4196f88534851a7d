"""Scalar uncertainty measures on credal sets."""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NegativeMassWarning, NoConvergence, TooManyLabels
from .simplex import Event, probability_vector

MAX_EVENT_LABELS = 16
_LOG2E = 1.0 / math.log(2.0)


def _event_indicators(d):
    """(d, 2^d) 0/1 matrix; column ``mask`` is the indicator of that event."""
    masks = np.arange(1 << d)
    return ((masks[None, :] >> np.arange(d)[:, None]) & 1).astype(float)


def _check_labels(d):
    if d > MAX_EVENT_LABELS:
        raise TooManyLabels(f"d={d} exceeds {MAX_EVENT_LABELS} (2^d events)")


def event_envelope(P, A):
    """(lower, upper) probability of event ``A`` over the credal set."""
    if not isinstance(A, Event):
        A = Event.of(A, P.d)
    if A.d != P.d:
        raise DimensionMismatch(f"event on {A.d} labels, polytope on {P.d}")
    probs = P.vertices @ A.indicator()
    return float(probs.min()), float(probs.max())


def lower_probabilities(P):
    """Lower probability of every event, indexed by bitmask."""
    _check_labels(P.d)
    vals = (P.vertices @ _event_indicators(P.d)).min(axis=0)
    vals[0] = 0.0
    vals[-1] = 1.0
    return vals


def upper_probabilities(P):
    _check_labels(P.d)
    vals = (P.vertices @ _event_indicators(P.d)).max(axis=0)
    vals[0] = 0.0
    vals[-1] = 1.0
    return vals


def imprecision_width(P):
    """Largest gap between upper and lower probability over proper events."""
    _check_labels(P.d)
    if P.d < 2:
        return 0.0
    probs = P.vertices @ _event_indicators(P.d)[:, 1:-1]
    return float((probs.max(axis=0) - probs.min(axis=0)).max())


def shannon_entropy(p):
    """Entropy in bits, with 0 log 0 = 0."""
    p = probability_vector(p)
    nz = p[p > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def _entropy(x):
    nz = x[x > 0]
    return float(-np.sum(nz * np.log2(nz)))


def _entropy_grad(x):
    return -(np.log2(np.maximum(x, 1e-12)) + _LOG2E)


def _line_search(x, direction, gmax):
    """Maximizer of the concave entropy along ``x + g * direction`` for g in [0, gmax]."""
    def slope(g):
        return float(_entropy_grad(x + g * direction) @ direction)

    if slope(0.0) <= 0.0:
        return 0.0
    if slope(gmax) >= 0.0:
        return gmax
    a, b = 0.0, gmax
    for _ in range(100):
        mid = 0.5 * (a + b)
        if slope(mid) > 0.0:
            a = mid
        else:
            b = mid
        if b - a < 1e-16:
            break
    return 0.5 * (a + b)


@dataclass(frozen=True)
class MaxEntropyResult:
    value: float
    point: np.ndarray
    gap: float
    iterations: int
    converged: bool


def maximize_entropy(P, tol=1e-6, max_iter=10_000):
    """Maximum-entropy distribution in P by away-step conditional gradient.

    The linear subproblem is an argmax over vertices; the iteration
    stops once the duality gap (an upper bound on the suboptimality)
    drops to ``tol``.
    """
    V = P.vertices
    m = len(V)
    w = np.full(m, 1.0 / m)
    x = w @ V
    gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        grad = _entropy_grad(x)
        scores = V @ grad
        s = int(np.argmax(scores))
        gap = float(scores[s] - grad @ x)
        if gap <= tol:
            break
        active = np.flatnonzero(w > 0)
        a = int(active[np.argmin(scores[active])])
        away_gap = float(grad @ x - scores[a])
        if gap >= away_gap or a == s:
            direction = V[s] - x
            gmax = 1.0
            g = _line_search(x, direction, gmax)
            w *= 1.0 - g
            w[s] += g
        else:
            direction = x - V[a]
            gmax = w[a] / (1.0 - w[a]) if w[a] < 1.0 else 0.0
            g = _line_search(x, direction, gmax)
            w *= 1.0 + g
            w[a] -= g
            if g >= gmax:
                w[a] = 0.0
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        x = w @ V
    converged = gap <= tol
    return MaxEntropyResult(_entropy(x), x, gap, it, converged)


def max_entropy(P, tol=1e-6, max_iter=10_000):
    """Upper entropy of the credal set, in bits.

    Warns with NoConvergence (and returns the best value found) when the
    duality gap is still above ``tol`` after ``max_iter`` iterations.
    """
    res = maximize_entropy(P, tol=tol, max_iter=max_iter)
    if not res.converged:
        warnings.warn(
            f"max_entropy: gap {res.gap:.3g} > tol {tol:.3g} after {res.iterations} iterations",
            NoConvergence,
            stacklevel=2,
        )
    return res.value


def mobius_transform(f, d):
    """Möbius inverse of a set function given as an array indexed by bitmask."""
    m = np.array(f, dtype=float)
    for j in range(d):
        shape = (1 << (d - j - 1), 2, 1 << j)
        view = m.reshape(shape)
        view[:, 1, :] -= view[:, 0, :]
    return m


def zeta_transform(m, d):
    """Inverse of :func:`mobius_transform`: f(A) = sum of m(B) over B subset of A."""
    f = np.array(m, dtype=float)
    for j in range(d):
        view = f.reshape((1 << (d - j - 1), 2, 1 << j))
        view[:, 1, :] += view[:, 0, :]
    return f


@dataclass(frozen=True)
class MassAssignment:
    masses: np.ndarray
    d: int

    def __getitem__(self, event):
        mask = event.mask if isinstance(event, Event) else int(event)
        return float(self.masses[mask])

    @property
    def has_negative(self):
        return bool(np.any(self.masses < -1e-12))

    def as_dict(self):
        return {Event(mask, self.d): float(v) for mask, v in enumerate(self.masses)}


def mobius_mass(P):
    """Möbius mass of the lower probability of P."""
    lower = lower_probabilities(P)
    return MassAssignment(mobius_transform(lower, P.d), P.d)


def generalized_hartley(P, warn=True):
    """Generalized Hartley nonspecificity, sum of m(A) log2|A|, in bits.

    When the lower envelope is not 2-monotone some masses come out
    negative; the value is still reported and a NegativeMassWarning is
    issued.
    """
    mass = mobius_mass(P)
    sizes = np.array([bin(mask).count("1") for mask in range(1 << P.d)])
    logs = np.zeros(len(sizes))
    logs[sizes > 0] = np.log2(sizes[sizes > 0])
    value = float(mass.masses @ logs)
    if mass.has_negative and warn:
        warnings.warn("lower envelope is not 2-monotone; negative Möbius masses",
                      NegativeMassWarning, stacklevel=2)
    return value
