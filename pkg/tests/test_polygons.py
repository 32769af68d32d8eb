"""Triples, triangle maps, translates, canonical generators, transition and saddle maps."""

from __future__ import annotations

import pytest

import helpers
from sfkit import models
from sfkit.diagram_core import enumerate_generators, relative_gradings
from sfkit.differential import NicenessRequired, differential_matrix
from sfkit.drawing import delete_curves
from sfkit.flinalg import F2Matrix, compose, induced_on_homology_equal, verify_chain_map
from sfkit.polygons import (GradingTie, canonical_theta, count_triangles, is_chain_map_triangle, saddle_map,
                            transition_map, translate_pair, triangle_matrix, validate_triple)

SHIPPED_TRIPLES = {
    "annulus": models.annulus_triple,
    "two_holes": models.two_hole_triple,
    "saddle": models.saddle_triple,
    "trace": models.trace_triple,
}


# -------------------------------------------------------------- validation
def test_annulus_triple_is_valid():
    report = validate_triple(models.annulus_triple())
    assert report.ok and report.triple_nice


def test_triple_with_unbalanced_pair_is_rejected():
    t = models.annulus_triple()
    report = validate_triple(delete_curves(t, [t.curve_ids["gamma"][0]]))
    assert not report.ok
    assert any(p.startswith("(alpha,gamma)") and "unbalanced" in p for p in report.problems)


def test_triple_with_positive_periodic_domain_is_flagged():
    report = validate_triple(translate_pair(helpers.parallel_pair(), "beta"))
    assert not report.admissible
    assert "triple is not admissible" in report.problems


def test_triangle_map_refuses_non_nice_triples():
    with pytest.raises(NicenessRequired, match="niceness required"):
        triangle_matrix(helpers.hexagon_diagram().relabel_kinds({"beta": "gamma"}))


# ---------------------------------------------------------------- triangles
@pytest.mark.parametrize("name", sorted(SHIPPED_TRIPLES))
def test_triangle_map_is_a_chain_map(name):
    assert is_chain_map_triangle(SHIPPED_TRIPLES[name]())


def test_counted_triangles_are_unions_of_embedded_triangles():
    t = models.annulus_triple()
    for x in enumerate_generators(t, "alpha", "beta"):
        for y in enumerate_generators(t, "beta", "gamma"):
            for w in enumerate_generators(t, "alpha", "gamma"):
                for dom in count_triangles(t, x, y, w):
                    assert all(m == 1 for _, m in dom.mult)


# ---------------------------------------------------------------- translates
def test_translate_of_one_curve_meets_it_twice():
    t = models.annulus_triple()
    assert len(t.points("beta", "gamma")) == 2


def test_translates_of_two_curves_add_two_points_each():
    t = models.two_hole_triple()
    pts = set(t.points("beta", "gamma"))
    assert len(pts) == 4
    for g in t.curve_ids["gamma"]:
        assert len(set(t.curve_points(g)) & pts) == 2


def test_translate_bottom_is_the_lower_point():
    d = models.annulus_triple().pair("beta", "gamma")
    top, bottom = canonical_theta(d, "top").generator, canonical_theta(d, "bottom").generator
    assert relative_gradings(d, top, bottom)[0] == 1


def test_unknot_theta_w_is_one_above_theta_z_in_gr_w():
    u = models.unknot_four_basepoints()
    tw, tz = canonical_theta(u, "top_w").generator, canonical_theta(u, "top_z").generator
    assert relative_gradings(u, tw, tz)[1] == 1


def test_w_z_flavours_need_basepoints():
    with pytest.raises(Exception, match="basepoints"):
        canonical_theta(models.d_ann(), "top_w")


# ------------------------------------------------------------ derived maps
def test_transition_map_sends_each_point_to_its_translate():
    t = models.annulus_triple()
    m = transition_map(t)
    assert all(len(m.image(x)) == 1 for x in m.domain)
    assert len({m.image(x)[0] for x in m.domain}) == len(m.domain)


def test_transition_and_its_inverse_compose_to_the_identity_on_homology():
    t = models.annulus_triple()
    forward = transition_map(t)
    back = transition_map(t.relabel_kinds({"beta": "gamma", "gamma": "beta"}))
    loop = compose(back, forward)
    cx = differential_matrix(t.pair("alpha", "beta"))
    loop = loop.reindex(cx.basis, cx.basis)
    assert induced_on_homology_equal(loop, F2Matrix.identity(cx.basis), cx, cx)


@pytest.mark.parametrize("orientation", ["w", "z"])
def test_saddle_maps_are_chain_maps(orientation):
    s = models.saddle_triple()
    m = saddle_map(s, orientation)
    src = differential_matrix(s.pair("alpha", "beta")).differential.reindex(m.domain, m.domain)
    tgt = differential_matrix(s.pair("alpha", "gamma")).differential.reindex(m.codomain, m.codomain)
    assert verify_chain_map(m, src, tgt)


def test_saddle_map_refuses_coinciding_thetas():
    # each bigon carries one w and one z basepoint, so n_w = n_z on every domain
    d = helpers.punctured_bigons(2, tags=("w", "z"))
    t = translate_pair(d, "alpha")
    with pytest.raises(GradingTie, match="grading tie"):
        saddle_map(t, "w")
