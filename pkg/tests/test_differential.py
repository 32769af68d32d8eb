"""Polygon counts and the differential."""

from __future__ import annotations

import pytest

import helpers
from sfkit import models
from sfkit.diagram_core import enumerate_generators, relative_gradings
from sfkit.differential import NicenessRequired, count_empty_polygons, differential_matrix
from sfkit.flinalg import homology


def ann_top_bottom():
    d = models.d_ann()
    x, y = enumerate_generators(d)
    return (d, x, y) if relative_gradings(d, x, y)[0] > 0 else (d, y, x)


def test_annulus_top_to_bottom_has_two_bigons():
    d, top, bottom = ann_top_bottom()
    res = count_empty_polygons(d, top, bottom)
    assert len(res.domains) == 2 and res.count_mod2 == 0


def test_annulus_bottom_to_top_has_none():
    d, top, bottom = ann_top_bottom()
    assert count_empty_polygons(d, bottom, top).domains == ()


def test_disk_counts_nothing():
    assert count_empty_polygons(models.d_disk(), (), ()).domains == ()


def test_non_nice_diagram_is_refused():
    d = helpers.hexagon_diagram()
    with pytest.raises(NicenessRequired, match="niceness required"):
        differential_matrix(d)


def test_disk_differential_is_zero():
    cx = differential_matrix(models.d_disk())
    assert cx.differential.shape == (1, 1) and cx.differential.is_zero()


def test_annulus_differential_is_zero():
    cx = differential_matrix(models.d_ann())
    assert cx.differential.shape == (2, 2) and cx.differential.is_zero()


def test_single_bigon_gives_one_entry():
    # puncturing one bigon leaves the other as the only counted domain
    d = helpers.punctured_bigons(1)
    cx = differential_matrix(d)
    assert len(cx.differential.entries) == 1
    assert homology(cx)[0] == 0


def test_counted_polygons_are_empty_embedded_and_positive():
    for d in (models.d_ann(), models.two_holes(), models.unknot_four_basepoints()):
        gens = enumerate_generators(d)
        for x in gens:
            for y in gens:
                for dom in count_empty_polygons(d, x, y).domains:
                    assert all(m == 1 for _, m in dom.mult)


def test_differential_squares_to_zero_on_shipped_diagrams():
    from sfkit.flinalg import compose
    from sfkit.open_book import to_diagram
    ds = [models.d_ann(), models.two_holes(), models.unknot_four_basepoints()]
    ds += [to_diagram(b).reversed() for b in models.shipped_open_books().values()]
    for d in ds:
        m = differential_matrix(d).differential
        assert compose(m, m).is_zero()
