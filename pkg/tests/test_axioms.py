import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from credalvol.axioms import (
    AxiomConfig, base_segment, base_triangle, check_axioms, check_continuity,
    check_probability_consistency, check_subadditivity, continuity_counterexample,
    vanishing_height_sequence, measure_value, random_isometric_copy,
)
from credalvol.errors import BaseTooLong, InvalidHeight, NotNested
from credalvol.simplex import (
    Grouping, contains, homothety, make_credal_polytope, simplex, singleton, strong_product,
)
from credalvol.volume import simplex_volume

from conftest import polytopes

ADAPTIVE = AxiomConfig(convention="adaptive")


def _verdicts(reports):
    return {r.axiom: r.verdict for r in reports}


def test_simplex_a1_a3_a7():
    D = simplex(3)
    reps = check_axioms(D, homothety(D, 0.5))
    assert _verdicts(reps) == {"A1": "pass", "A3": "pass", "A7": "pass"}
    assert reps[0].witness["value"] == pytest.approx(math.sqrt(3) / 2)
    assert reps[1].witness["U(Q)"] == pytest.approx(0.25 * math.sqrt(3) / 2)


def test_a1_measures_thin_sets_at_ambient_dimension():
    # a long edge-to-edge segment in the 3-label simplex: its length exceeds the area bound
    seg = make_credal_polytope([(1, 0, 0), (0, 1, 0)])
    ref = check_axioms(seg)[0]
    assert ref.passed and ref.witness["value"] == 0.0 and ref.witness["dim"] == 2
    ada = check_axioms(seg, config=ADAPTIVE)[0]
    assert ada.verdict == "fail" and ada.witness["value"] == pytest.approx(math.sqrt(2))


def test_not_nested():
    D = simplex(3)
    Q = make_credal_polytope([(0.5, 0.5, 0), (0.5, 0, 0.5)])
    with pytest.raises(NotNested):
        check_axioms(homothety(D, 0.3), Q)


def test_a3_without_q_is_not_applicable():
    assert _verdicts(check_axioms(simplex(3)))["A3"] == "not-applicable"


@given(polytopes(), st.integers(0, 2**31))
def test_isometric_copies_stay_in_simplex_and_keep_volume(P, seed):
    Q, kinds = random_isometric_copy(P, np.random.default_rng(seed))
    assert np.all(Q.vertices >= 0)
    assert Q.k == P.k
    assert measure_value(Q) == pytest.approx(measure_value(P), rel=1e-9, abs=1e-12)
    assert kinds[0] == "permutation"


@pytest.mark.parametrize("measure", ["maxent", "gh"])
def test_other_measures_run(measure):
    D = simplex(3)
    reps = check_axioms(D, homothety(D, 0.5), measure)
    assert reps[0].verdict == "pass"
    assert reps[0].witness["bound"] == pytest.approx(math.log2(3))


def test_a4_homothety_and_constant_singleton():
    D = simplex(3)
    seq = [homothety(D, 1.0 / n) for n in range(1, 21)]
    rep = check_probability_consistency(seq)
    assert rep.passed
    assert rep.witness["values"] == sorted(rep.witness["values"], reverse=True)
    p = (0.2, 0.3, 0.5)
    assert check_probability_consistency([singleton(p)] * 4).passed
    with pytest.raises(ValueError):
        check_probability_consistency([D, D])


def test_a4_flags_rebound():
    D = simplex(3)
    seq = [homothety(D, 0.5), homothety(D, 0.1), homothety(D, 0.3)]
    rep = check_probability_consistency(seq)
    assert rep.verdict == "fail" and rep.witness["rebound_index"] == 2


def test_vanishing_height_table_and_verdicts():
    out = continuity_counterexample(0.5, 10)
    assert out["rows"][9]["vol2"] == pytest.approx(0.025, abs=1e-15)
    assert out["limit"]["vol1"] == pytest.approx(0.5, abs=1e-15)
    assert out["limit"]["vol2"] == 0.0
    tris, seg = vanishing_height_sequence(0.5, 100)
    assert check_continuity(tris, seg, config=ADAPTIVE).verdict == "fail"
    assert check_probability_consistency(tris + [seg], config=ADAPTIVE).verdict == "fail"
    # at the common reference dimension the sequence is continuous
    assert check_continuity(tris, seg).verdict == "pass"


def test_counterexample_contracts():
    with pytest.raises(BaseTooLong):
        base_segment(2.0)
    with pytest.raises(InvalidHeight):
        base_triangle(0.5, 2.0)
    with pytest.raises(ValueError):
        vanishing_height_sequence(0.5, 1)
    T = base_triangle(math.sqrt(2), math.sqrt(6) / 2)
    assert np.allclose(np.sort(T.vertices, axis=0), np.sort(np.eye(3), axis=0), atol=1e-12)
    assert measure_value(T) == pytest.approx(simplex_volume(3), abs=1e-12)


@given(st.floats(0.05, math.sqrt(2)), st.floats(0.05, math.sqrt(6) / 2))
def test_triangle_area_and_nesting(b, h):
    T = base_triangle(b, h)
    seg = base_segment(b)
    assert measure_value(T) == pytest.approx(b * h / 2, rel=1e-9)
    assert all(contains(T, v) for v in seg.vertices)
    assert measure_value(seg) == pytest.approx(b, rel=1e-12)


def test_diagonal_interval_subadditivity():
    P = make_credal_polytope([(0.2, 0.8), (0.5, 0.5)])
    a5, a6 = check_subadditivity(P, Grouping.diagonal())
    assert a5.passed and not a6.passed
    assert a5.witness["sum"] == pytest.approx(0.6 * math.sqrt(2))
    assert a5.witness["U(P)"] == pytest.approx(0.3 * math.sqrt(2))
    assert a5.witness["si_instance"] is None


@pytest.mark.parametrize("factor,label", [(0, "y1=y3"), (1, "y2=y4")])
def test_degenerate_factor_additivity(factor, label):
    P = make_credal_polytope([(0.2, 0.8), (0.5, 0.5)])
    a5, a6 = check_subadditivity(P, Grouping.degenerate(factor))
    assert a5.passed and a6.passed
    assert a6.witness["si_instance"] == [label]


def test_singleton_joint_set_is_trivially_additive():
    assert all(r.passed for r in check_subadditivity(singleton((0.3, 0.7)), Grouping.diagonal()))


def test_strong_product_with_degenerate_factor_is_additive(rng):
    P2 = make_credal_polytope(rng.dirichlet(np.ones(3), size=4))
    J = strong_product(singleton((1.0,)), P2)
    reps = check_subadditivity(J, Grouping.product(1, 3))
    assert all(r.passed for r in reps)
