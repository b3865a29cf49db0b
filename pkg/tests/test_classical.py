from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fixture_graph
from drgkit import errors
from drgkit.classical import (
    ClassicalParameters,
    classical_b_c,
    classical_equivalence_crosscheck,
    classical_intersection_array,
    fit_classical_parameters,
    gaussian_bracket,
    verify_dual_relation,
)
from drgkit.drg import IntersectionArray
from drgkit.spectral import eigen_from_array, find_qpoly_orderings


@given(st.integers(0, 12), st.integers(-5, 5).filter(lambda b: b not in (0, 1)))
def test_gaussian_bracket_closed_form(i, b):
    assert gaussian_bracket(i, b) == Fraction(b ** i - 1, b - 1)


def test_gaussian_bracket_small():
    assert [gaussian_bracket(i, 1) for i in range(5)] == [0, 1, 2, 3, 4]
    assert [gaussian_bracket(i, -2) for i in range(5)] == [0, 1, -1, 3, -5]
    assert gaussian_bracket(3, Fraction(1, 2)) == Fraction(7, 4)
    with pytest.raises(ValueError):
        gaussian_bracket(-1, 2)


def test_parameter_validation():
    with pytest.raises(ValueError):
        ClassicalParameters(3, 0, 0, 1)
    with pytest.raises(ValueError):
        ClassicalParameters(3, -1, 0, 1)


def test_her42_array():
    arr = classical_intersection_array(ClassicalParameters(4, -2, -3, -17))
    assert (arr.b, arr.c) == ((85, 84, 80, 64), (1, 2, 12, 40))
    assert arr.a[4] == 45


def test_her32_array():
    arr = classical_intersection_array(ClassicalParameters(3, -2, -3, 7))
    assert str(arr) == "{21,20,16;1,2,12}"


def test_b_D_vanishes():
    bs, _ = classical_b_c(ClassicalParameters(4, -2, -3, -17))
    assert bs[4] == 0


def test_invalid_entries():
    with pytest.raises(errors.NonIntegerEntry):
        classical_intersection_array(ClassicalParameters(3, 1, 0, Fraction(1, 2)))
    with pytest.raises(errors.NonPositiveEntry):
        classical_intersection_array(ClassicalParameters(3, 1, 0, -1))


GRID = [
    (3, -2, -3, 7),       # Her(3,2)
    (4, -2, -3, -17),     # Her(4,2)
    (3, -3, -4, 26),      # Her(3,3)
    (3, 1, 0, 1),         # Q3
    (4, 1, 0, 1),         # Q4
    (3, 1, 0, 2),         # H(3,3)
    (3, 1, 1, 3),         # J(6,3)
    (4, 1, 1, 5),         # J(9,4)
    (3, 2, 0, 1),         # dual polar type
    (3, 2, 2, 14),        # Grassmann J_2(6,3)
    (3, 2, 0, 2),
    (5, 1, 0, 3),
]


@pytest.mark.parametrize("params", GRID)
def test_fit_of_generated_contains_parameters(params):
    arr = classical_intersection_array(ClassicalParameters(*params))
    fit = fit_classical_parameters(arr)
    assert fit.matched
    assert fit.contains(*params)
    for cand in fit.candidates:
        assert classical_intersection_array(cand.params) == arr


@pytest.mark.parametrize("spec, params", [
    ("hermitian:3,2", (3, -2, -3, 7)),
    ("hypercube:3", (3, 1, 0, 1)),
    ("hypercube:4", (4, 1, 0, 1)),
    ("hamming:3,3", (3, 1, 0, 2)),
    ("johnson:6,3", (3, 1, 1, 3)),
])
def test_fit_on_graphs(spec, params):
    fx = fixture_graph(spec)
    assert fit_classical_parameters(fx.cert.array).contains(*params)
    if "classical_parameters" in fx.meta:
        assert tuple(fx.meta["classical_parameters"]) == params


def test_c6_and_odd_graph_do_not_fit():
    fit = fit_classical_parameters(fixture_graph("cycle:6").cert.array)
    assert not fit.matched and fit.to_json()["matched"] is False
    assert not fit_classical_parameters(fixture_graph("kneser:7,3").cert.array).matched


def test_fit_requires_diameter_three():
    with pytest.raises(errors.HypothesisViolated):
        fit_classical_parameters(IntersectionArray([3, 2], [1, 1]))


def test_irrational_root_candidates_are_checked():
    # these cubics have no integer roots; any float candidate reported must
    # regenerate the array
    checked = 0
    for b0, b1, b2, c2, c3 in [(6, 5, 4, 2, 5), (5, 4, 2, 2, 3), (10, 6, 4, 2, 5)]:
        try:
            arr = IntersectionArray([b0, b1, b2], [1, c2, c3])
        except ValueError:
            continue
        checked += 1
        for cand in fit_classical_parameters(arr).candidates:
            assert cand.max_deviation <= 1e-9 * arr.k
    assert checked >= 1


def test_dual_relation_her32():
    fx = fixture_graph("hermitian:3,2")
    sd = eigen_from_array(fx.cert.array)
    (o,) = find_qpoly_orderings(sd)
    assert verify_dual_relation(o.dual, -2) < 1e-8
    assert verify_dual_relation(o.dual.theta_star, 3) > 1e-2


@pytest.mark.parametrize("spec, b", [("hypercube:3", 1), ("hypercube:4", 1),
                                     ("johnson:6,3", 1), ("hamming:3,3", 1)])
def test_dual_relation_classical_graphs(spec, b):
    sd = eigen_from_array(fixture_graph(spec).cert.array)
    devs = [verify_dual_relation(o.dual, b) for o in find_qpoly_orderings(sd)]
    assert devs and min(devs) < 1e-8


def test_dual_relation_degenerate():
    with pytest.raises(errors.DegenerateDual):
        verify_dual_relation(np.array([3.0, 3.0, 1.0]), 2)
    with pytest.raises(ValueError):
        verify_dual_relation(np.array([3.0, 1.0, -1.0]), -1)


def test_equivalence_crosscheck_her32():
    fx = fixture_graph("hermitian:3,2")
    sd = eigen_from_array(fx.cert.array)
    rep = classical_equivalence_crosscheck(fx.g, fx.cert, sd, fx.oracle)
    assert rep.cond_i and rep.cond_ii and rep.cond_iii and rep.agree


def test_equivalence_crosscheck_needs_gate():
    fx = fixture_graph("hypercube:3")
    with pytest.raises(errors.HypothesisViolated):
        classical_equivalence_crosscheck(fx.g, fx.cert, eigen_from_array(fx.cert.array))
