import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize

from credalvol.errors import NegativeMassWarning, NoConvergence, TooManyLabels
from credalvol.measures import (
    event_envelope, generalized_hartley, imprecision_width, lower_probabilities, max_entropy,
    maximize_entropy, mobius_mass, mobius_transform, shannon_entropy, upper_probabilities,
    zeta_transform,
)
from credalvol.simplex import Event, make_credal_polytope, simplex, singleton

from conftest import polytopes

INTERVAL = make_credal_polytope([(0.2, 0.8), (0.5, 0.5)])


def test_interval_example():
    assert event_envelope(INTERVAL, Event.of([0], 2)) == pytest.approx((0.2, 0.5))
    assert imprecision_width(INTERVAL) == pytest.approx(0.3)
    m = mobius_mass(INTERVAL)
    assert m.masses == pytest.approx([0.0, 0.2, 0.5, 0.3])
    assert generalized_hartley(INTERVAL) == pytest.approx(0.3)
    assert max_entropy(INTERVAL) == pytest.approx(1.0, abs=1e-9)


def test_shannon_entropy_values():
    assert shannon_entropy((0.25, 0.75)) == pytest.approx(0.811278124459, abs=1e-12)
    assert shannon_entropy((1.0, 0.0, 0.0)) == 0.0
    assert shannon_entropy(np.full(8, 1 / 8)) == pytest.approx(3.0)


def test_too_many_labels():
    with pytest.raises(TooManyLabels):
        lower_probabilities(simplex(17))


@given(polytopes())
def test_envelopes_are_conjugate(P):
    low, up = lower_probabilities(P), upper_probabilities(P)
    full = (1 << P.d) - 1
    for mask in range(1 << P.d):
        assert up[mask] == pytest.approx(1.0 - low[full ^ mask], abs=1e-12)
    assert np.all(low <= up + 1e-15)


@given(polytopes())
def test_width_zero_iff_singleton(P):
    w = imprecision_width(P)
    assert (w < 1e-12) == (P.n_vertices == 1)


@given(st.integers(1, 8), st.integers(0, 2**31))
def test_mobius_zeta_roundtrip(d, seed):
    f = np.random.default_rng(seed).normal(size=1 << d)
    assert np.allclose(zeta_transform(mobius_transform(f, d), d), f, atol=1e-12)


@given(polytopes(d=st.integers(2, 5)))
def test_max_entropy_against_slsqp(P):
    res = maximize_entropy(P, tol=1e-9)
    V = P.vertices

    def neg(w):
        x = np.clip(w @ V, 1e-300, None)
        return float(np.sum(x * np.log2(x)))

    m = len(V)
    ref = minimize(neg, np.full(m, 1 / m), method="SLSQP", bounds=[(0, 1)] * m,
                   constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1}],
                   options={"ftol": 1e-14, "maxiter": 500})
    assert res.value >= -ref.fun - 1e-7
    assert res.value <= -ref.fun + 1e-6
    assert res.value <= math.log2(P.d) + 1e-12


@given(polytopes())
def test_max_entropy_bounds(P):
    h = max_entropy(P)
    assert max(shannon_entropy(v) for v in P.vertices) <= h + 1e-9
    assert h <= math.log2(P.d) + 1e-12


def test_max_entropy_no_convergence_warning():
    rng = np.random.default_rng(0)
    P = make_credal_polytope(0.3 * rng.dirichlet(np.ones(4), size=8) + 0.7 * np.eye(4)[0])
    with pytest.warns(NoConvergence):
        max_entropy(P, tol=1e-12, max_iter=2)
    assert maximize_entropy(P, tol=1e-12).converged


def test_gh_negative_mass_warning():
    # the triangle of edge midpoints has a lower envelope that is not 2-monotone
    P = make_credal_polytope([(0.5, 0.5, 0), (0.5, 0, 0.5), (0, 0.5, 0.5)])
    m = mobius_mass(P)
    assert m.has_negative
    with pytest.warns(NegativeMassWarning):
        generalized_hartley(P)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        generalized_hartley(P, warn=False)


@pytest.mark.parametrize("d", range(2, 7))
def test_vacuous_and_singleton_values(d):
    assert generalized_hartley(simplex(d)) == pytest.approx(math.log2(d), abs=1e-12)
    p = np.random.default_rng(d).dirichlet(np.ones(d))
    assert generalized_hartley(singleton(p)) == pytest.approx(0.0, abs=1e-12)
    assert max_entropy(singleton(p)) == pytest.approx(shannon_entropy(p), abs=1e-12)
