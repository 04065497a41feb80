from __future__ import annotations

import copy
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from floercone.heegaard import (DiagramError, Domain, alexander_grading, chern_evaluation, diagram_from_json,
                                euler_measure, maslov_consistency, region_euler, relative_check, view_gradings)
from floercone.io import data_path, read_json


@pytest.fixture(scope="module")
def doc():
    return read_json(data_path("trefoil_p5.json"))


@pytest.fixture(scope="module")
def diagram(doc):
    return diagram_from_json(doc)


def test_alpha_beta_values(diagram):
    assert dict(view_gradings(diagram, diagram.view("alpha-beta"))) == {"ax": -1, "bx": 0, "cx": 1}


def test_alpha_gamma_values(diagram):
    got = sorted(a for _, a in view_gradings(diagram, diagram.view("alpha-gamma")))
    assert got == [Fraction(-3, 5), Fraction(-1, 5), 0, 0, 0, Fraction(1, 5), Fraction(3, 5)]


def test_surface_measures(diagram):
    assert euler_measure(diagram, diagram.surface()) == -2    # genus 2
    assert euler_measure(diagram, diagram.domains["P"]) == -4


@given(st.integers(-6, 6))
def test_invariant_under_adding_surface(c):
    diagram = diagram_from_json(read_json(data_path("trefoil_p5.json")))
    for view in diagram.views:
        P = diagram.domains[view.domain]
        shifted = P + diagram.surface().scaled(c)
        for g in view.generators:
            assert alexander_grading(diagram, shifted, g, view.w, view.z) == \
                alexander_grading(diagram, P, g, view.w, view.z)


def test_chern_evaluation_of_surface_is_zero(diagram):
    view = diagram.view("alpha-beta")
    for g in view.generators:
        assert chern_evaluation(diagram, diagram.surface(), g, view.w) == 0


def test_chern_needs_integer():
    torus = diagram_from_json({
        "regions": [{"id": "R", "euler": "0/1"}, {"id": "S", "disk": True, "corners": 2}],
        "points": [{"id": "x", "corners": ["R", "R", "R", "S"], "alpha": "a", "beta": "b"}],
        "basepoints": [{"id": "w", "sides": ["R", "R"]}],
    })
    assert chern_evaluation(torus, Domain({"S": 2}), ["x"], "w") == 2
    with pytest.raises(DiagramError):
        chern_evaluation(torus, Domain({"R": 1, "S": 1}), ["x"], "w")


def test_relative_check_trivial_domain(diagram):
    view = diagram.view("alpha-beta")
    check = relative_check(diagram, view, diagram.surface(), ["a", "x"], ["a", "x"])
    assert check and check.predicted == 0


def test_wz_maslov():
    assert maslov_consistency("0/1", "-2/1", 1)
    assert not maslov_consistency(0, 0, Fraction(1, 5))


def test_region_euler_rules():
    assert region_euler({"disk": True, "corners": 6}) == Fraction(-1, 2)
    with pytest.raises(DiagramError):
        region_euler({"id": "outer", "corners": 6})


def test_bad_diagrams(doc):
    bad = copy.deepcopy(doc)
    bad["points"][0]["corners"][0] = "R99"
    with pytest.raises(DiagramError):
        diagram_from_json(bad)
    bad = copy.deepcopy(doc)
    bad["views"][0]["generators"][0] = ["a", "b"]
    with pytest.raises(DiagramError):
        diagram_from_json(bad)
    bad = copy.deepcopy(doc)
    bad["domains"]["P"]["lambda_coefficient"] = 0
    d = diagram_from_json(bad)
    with pytest.raises(DiagramError):
        view_gradings(d, d.view("alpha-beta"))
