"""Diagram validation, generators, domains, Maslov index, gradings and periodic domains."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

import helpers
from sfkit import models
from sfkit.diagram_core import (Domain, enumerate_generators, find_connecting_domain, is_admissible, is_nice,
                                maslov_index, periodic_domain_basis, relative_gradings, validate)
from sfkit.differential import count_empty_polygons
from sfkit.drawing import Route, disjoint_union
from sfkit.formats import parse_diagram
from sfkit.open_book import positive_stabilize, to_diagram

F13, F23, F14 = Fraction(1, 3), Fraction(2, 3), Fraction(1, 4)


def ann_thetas():
    d = models.d_ann()
    gens = enumerate_generators(d)
    hi = max(gens, key=lambda g: relative_gradings(d, g, gens[0])[0])
    lo = next(g for g in gens if g != hi)
    return d, hi, lo


# --------------------------------------------------------------- validate
def test_disk_is_valid():
    assert validate(models.d_disk()) == []


def test_shipped_models_are_valid():
    for make in (models.d_ann, models.two_holes, models.unknot_four_basepoints):
        assert validate(make()) == []


def test_unbalanced_is_reported():
    problems = validate(helpers.only_alpha())
    assert any("unbalanced" in p for p in problems)
    assert validate(helpers.only_alpha(), balanced=False) == []


def test_non_alternating_crossing_is_reported():
    d = parse_diagram(helpers.non_alternating_annulus_text(), validate=False)
    assert any("corner count != 4" in p for p in validate(d))


# ------------------------------------------------------------- generators
def test_disk_has_one_empty_generator():
    assert enumerate_generators(models.d_disk()) == [()]


def test_annulus_has_two_generators():
    assert len(enumerate_generators(models.d_ann())) == 2


def test_disjoint_curves_have_no_generators():
    assert enumerate_generators(helpers.parallel_pair()) == []


def test_two_holes_generators_are_products():
    assert len(enumerate_generators(models.two_holes())) == 4


# ---------------------------------------------------------------- domains
def test_annulus_connecting_domain_is_a_bigon_up_to_periodic_domains():
    d, hi, lo = ann_thetas()
    found = find_connecting_domain(d, hi, lo).as_dict()
    periodic = periodic_domain_basis(d)[0].as_dict()
    interior = [r.id for r in d.regions if not r.touches_boundary]
    regions = set(found) | set(periodic) | set(interior)
    shifts = [{r: found.get(r, 0) + k * periodic.get(r, 0) for r in regions} for k in range(-3, 4)]
    assert any({r: m for r, m in s.items() if m} in ({b: 1} for b in interior) for s in shifts)


def test_connecting_domain_from_x_to_x_is_zero():
    d, hi, _ = ann_thetas()
    assert find_connecting_domain(d, hi, hi).mult == ()


def test_blocked_generators_are_not_connected():
    # both bigons punctured: every domain between the two points meets a boundary region
    d = helpers.punctured_bigons(2)
    x, y = enumerate_generators(d)
    assert find_connecting_domain(d, x, y) is None
    assert relative_gradings(d, x, y) is None


# ----------------------------------------------------------- maslov index
def test_bigon_index_is_one():
    d, hi, lo = ann_thetas()
    for r in (r.id for r in d.regions if not r.touches_boundary):
        assert maslov_index(d, Domain.make({r: 1}, hi, lo)) == 1


def test_square_index_is_one():
    book = models.annulus_open_book(1)
    book = positive_stabilize(book, Route(("e0b", F13), (), ("e0b", F23)))
    book = positive_stabilize(book, Route(("e0a", F14), (), ("e1a", F14)))
    d = to_diagram(book).reversed()
    squares = []
    gens = enumerate_generators(d)
    for x in gens:
        for y in gens:
            if len(set(x) - set(y)) == 2:
                squares += count_empty_polygons(d, x, y).domains
    assert squares
    assert all(maslov_index(d, s) == 1 for s in squares)


def test_zero_domain_index_is_zero():
    d, hi, _ = ann_thetas()
    assert maslov_index(d, Domain.make({}, hi, hi)) == 0


# --------------------------------------------------------------- gradings
def test_annulus_grading_gap_is_one():
    d, hi, lo = ann_thetas()
    assert relative_gradings(d, hi, lo)[0] == 1


def test_grading_of_generator_against_itself():
    u = models.unknot_four_basepoints()
    for g in enumerate_generators(u):
        assert relative_gradings(u, g, g) == (0, 0, 0, 0)


def test_untagged_diagram_has_no_w_z_gradings():
    d, hi, lo = ann_thetas()
    assert relative_gradings(d, hi, lo)[1:] == (None, None, None)


def test_unknot_alexander_grading_is_half_the_difference():
    u = models.unknot_four_basepoints()
    x, y = enumerate_generators(u)
    gr, gr_w, gr_z, a = relative_gradings(u, x, y)
    assert 2 * a == gr_w - gr_z


# ------------------------------------------------------ periodic domains
def test_disk_has_no_periodic_domains():
    assert periodic_domain_basis(models.d_disk()) == []


def test_annulus_has_one_periodic_domain():
    assert len(periodic_domain_basis(models.d_ann())) == 1


def test_two_annuli_have_two_periodic_domains():
    u, _ = disjoint_union(models.d_ann(), models.d_ann())
    assert len(periodic_domain_basis(u)) == 2


def test_admissibility():
    assert is_admissible(models.d_disk())
    assert is_admissible(models.d_ann())
    assert not is_admissible(helpers.parallel_pair())


def test_niceness():
    assert is_nice(models.d_ann())
    assert is_nice(models.d_disk())
    assert not is_nice(helpers.hexagon_diagram())


# -------------------------------------------------------------- properties
GRADED = {
    "annulus": models.d_ann(),
    "two_holes": models.two_holes(),
    "unknot": models.unknot_four_basepoints(),
}


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(sorted(GRADED)), data=st.data())
def test_gradings_are_antisymmetric(name, data):
    d = GRADED[name]
    gens = enumerate_generators(d)
    x, y = data.draw(st.sampled_from(gens)), data.draw(st.sampled_from(gens))
    fwd, back = relative_gradings(d, x, y), relative_gradings(d, y, x)
    assert all((a is None and b is None) or a == -b for a, b in zip(fwd, back))


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(sorted(GRADED)), data=st.data())
def test_orientation_reversal_negates_the_grading(name, data):
    d = GRADED[name]
    gens = enumerate_generators(d)
    x, y = data.draw(st.sampled_from(gens)), data.draw(st.sampled_from(gens))
    assert relative_gradings(d.reversed(), x, y)[0] == -relative_gradings(d, x, y)[0]


@settings(max_examples=80, deadline=None)
@given(name=st.sampled_from(sorted(GRADED)), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_maslov_index_is_additive(name, seed, data):
    d = GRADED[name]
    gens = enumerate_generators(d)
    x, y, z = (data.draw(st.sampled_from(gens)) for _ in range(3))
    rng = random.Random(seed)
    a, b = helpers.random_domain(rng, d, x, y), helpers.random_domain(rng, d, y, z)
    assert maslov_index(d, a + b) == maslov_index(d, a) + maslov_index(d, b)


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(sorted(GRADED)), k=st.integers(-3, 3), data=st.data())
def test_periodic_domains_do_not_change_the_grading(name, k, data):
    d = GRADED[name]
    gens = enumerate_generators(d)
    x, y = data.draw(st.sampled_from(gens)), data.draw(st.sampled_from(gens))
    base = find_connecting_domain(d, x, y)
    shifted = base.as_dict()
    for p in periodic_domain_basis(d):
        for r, m in p.mult:
            shifted[r] = shifted.get(r, 0) + k * m
    assert maslov_index(d, Domain.make(shifted, x, y)) == maslov_index(d, base)
