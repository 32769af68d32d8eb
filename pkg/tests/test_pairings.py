"""Trace and cotrace, the trace-cobordism functional, and turn-around duality."""

from __future__ import annotations

from fractions import Fraction

import pytest

from sfkit import models
from sfkit.diagram_core import relative_gradings
from sfkit.flinalg import BasisMismatch, F2Matrix, F2Vector
from sfkit.pairings import (UNIT, PairingContext, check_turnaround_duality, cotrace_element, cotrace_is_cycle,
                            f1_duality_maps, gram_matrix, h1_duality_maps, trace_cobordism_map, trace_descends,
                            trace_form, trace_is_chain_map, trace_matrix, trace_pair, trace_pipeline,
                            zigzag_identities)
from sfkit.polygons import canonical_theta

FEET = (("e0", Fraction(1, 3)), ("e0", Fraction(2, 3)))


def ann_context():
    ctx = PairingContext(models.d_ann())
    x, y = ctx.generators
    top, bottom = (x, y) if relative_gradings(ctx.diagram, x, y)[0] > 0 else (y, x)
    return ctx, top, bottom


def test_trace_pair_on_thetas():
    ctx, top, bottom = ann_context()
    assert trace_pair(ctx, top, top) == 1
    assert trace_pair(ctx, top, bottom) == 0


def test_trace_pair_rejects_strangers():
    ctx, top, _ = ann_context()
    with pytest.raises(BasisMismatch):
        trace_pair(ctx, top, ("nowhere",))


def test_trace_form_is_bilinear_extension():
    ctx, top, bottom = ann_context()
    both = F2Vector.from_labels(ctx.generators, [top, bottom])
    one = F2Vector.from_labels(ctx.generators, [top])
    assert trace_form(ctx, both, one) == 1 and trace_form(ctx, both, both) == 0


def test_cotrace_of_the_disk():
    ctx = PairingContext(models.d_disk())
    assert cotrace_element(ctx).labels() == [((), ())]


def test_cotrace_of_the_annulus():
    ctx, top, bottom = ann_context()
    assert set(cotrace_element(ctx).labels()) == {(top, top), (bottom, bottom)}


@pytest.mark.parametrize("make", [models.d_disk, models.d_ann, models.two_holes], ids=["disk", "annulus", "two_holes"])
def test_pairing_identities(make):
    ctx = PairingContext(make())
    assert gram_matrix(ctx) == F2Matrix.identity(ctx.generators)
    assert trace_is_chain_map(ctx) and cotrace_is_cycle(ctx) and trace_descends(ctx)
    assert zigzag_identities(ctx) == (True, True)


def test_trace_cobordism_functional_picks_the_bottom():
    d = models.trace_triple().pair("alpha", "gamma")
    m = trace_cobordism_map(d)
    bottom = canonical_theta(d, "bottom").generator
    assert [g for g in m.domain if m.image(g)] == [bottom]
    assert m.codomain == (UNIT,)


def test_trace_pipeline_is_the_kronecker_pairing():
    t = models.trace_triple()
    pipeline = trace_pipeline(t)
    kronecker = trace_matrix(PairingContext(t.pair("alpha", "beta")))
    assert pipeline.reindex(kronecker.domain, kronecker.codomain) == kronecker


@pytest.mark.parametrize("make", [models.d_disk, models.d_ann], ids=["disk", "annulus"])
def test_one_handle_duality(make):
    assert check_turnaround_duality(*f1_duality_maps(make(), *FEET))
    assert check_turnaround_duality(*h1_duality_maps(make(), *FEET))


def test_corrupted_turned_map_is_not_dual():
    forward, turned = f1_duality_maps(models.d_ann(), *FEET)
    bad = turned + F2Matrix.from_images(turned.domain, turned.codomain, {turned.domain[0]: [turned.codomain[-1]]})
    assert not check_turnaround_duality(forward, bad)


def test_duality_needs_dual_generator_sets():
    forward, _ = f1_duality_maps(models.d_ann(), *FEET)
    with pytest.raises(BasisMismatch):
        check_turnaround_duality(forward, forward)

