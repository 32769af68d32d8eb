"""Partial open books: checks, diagrams, contact classes and stabilization."""

from __future__ import annotations

from fractions import Fraction

import pytest

from sfkit import models
from sfkit.diagram_core import enumerate_generators
from sfkit.differential import differential_matrix
from sfkit.drawing import Route
from sfkit.flinalg import homology, is_boundary
from sfkit.isomorphism import find_isomorphism
from sfkit.open_book import (ArcBasis, OpenBookError, PartialOpenBook, check_open_book, eh_cycle, eh_data,
                             eh_routes_agree, positive_stabilize, to_diagram)

HALF = Fraction(1, 2)


def contact_complex(pob):
    return differential_matrix(to_diagram(pob).reversed())


def test_shipped_books_are_valid():
    for book in models.shipped_open_books().values():
        check_open_book(book)


def test_product_book_gives_the_disk():
    assert find_isomorphism(to_diagram(models.product_open_book()), models.d_disk()) is not None


def test_stabilized_disk_book_has_one_generator_and_rank_one():
    d = to_diagram(models.annulus_open_book(1))
    assert len(enumerate_generators(d)) == 1
    assert homology(differential_matrix(d.reversed()))[0] == 1


def test_identity_annulus_book_has_rank_two():
    # P x [0,1] is a 2-handle along a meridian of S x I: the manifold is S1 x S2 minus a ball
    d = to_diagram(models.annulus_open_book(0))
    assert len(enumerate_generators(d)) == 2
    assert homology(differential_matrix(d.reversed()))[0] == 2


@pytest.mark.parametrize("images", [
    (Route(("e0a", HALF), (), ("e1b", HALF)),),
    (Route(("e0a", Fraction(1, 3)), (), ("e1a", HALF)),),
    (),
])
def test_bad_monodromy_is_rejected(images):
    pob = models.annulus_open_book(0)
    with pytest.raises(OpenBookError):
        check_open_book(PartialOpenBook(pob.page, pob.sub_page, pob.basis, images))


def test_intersecting_basis_arcs_are_rejected():
    pob = models.annulus_open_book(0)
    arcs = (Route(("e0a", HALF), (), ("e1a", HALF)), Route(("e0a", Fraction(1, 4)), (), ("e1a", Fraction(1, 4))))
    with pytest.raises(OpenBookError, match="delta"):
        check_open_book(PartialOpenBook(pob.page, pob.sub_page, ArcBasis(arcs), pob.images * 2))


def test_product_class_is_the_empty_generator_and_survives():
    pob = models.product_open_book()
    v = eh_cycle(pob)
    assert v.labels() == [()]
    assert not is_boundary(contact_complex(pob), v)


def test_stabilized_disk_class_is_its_single_generator():
    pob = models.annulus_open_book(1)
    d, v = eh_data(pob)
    assert v.labels() == enumerate_generators(d)


@pytest.mark.parametrize("name", sorted(models.shipped_open_books()))
def test_classes_are_cycles_and_agree_with_handles(name):
    pob = models.shipped_open_books()[name]
    cx = contact_complex(pob)
    v = eh_cycle(pob)
    assert cx.differential.apply(v).is_zero()
    assert eh_routes_agree(pob)


def test_stabilization_off_the_images_keeps_the_old_images():
    pob = models.annulus_open_book(0)
    stab = positive_stabilize(pob, Route(("e0b", Fraction(1, 3)), (), ("e0b", Fraction(2, 3))))
    assert len(stab.arcs) == len(pob.arcs) + 1
    assert stab.images[: len(pob.images)] == pob.images
    assert stab.arcs[: len(pob.arcs)] == pob.arcs
    check_open_book(stab)
