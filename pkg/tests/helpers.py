"""Constructions shared by the acceptance suite and the module tests."""

from __future__ import annotations

import random
from pathlib import Path
from fractions import Fraction as F

from sfkit import models
from sfkit.contact_handles import (CompoundStab, ContactHandle, F1Attach, HandleError, attach_h1, attach_h2,
                                   compound_stabilize, foot_edge, run_script, standard_position)
from sfkit.diagram_core import Domain, find_connecting_domain, maslov_index, periodic_domain_basis
from sfkit.drawing import Route
from sfkit.isomorphism import iter_isomorphisms, transports


def split_circle_edge(before, after) -> str:
    """An edge of a circle that a 2-handle split off and that bounds the new pair in standard position.

    Circles of ``after`` with the same edges as a circle of ``before`` were
    untouched by the handle.  Of the two halves of the split circle, the one
    facing the rest of the diagram is not in standard position.
    """
    old = {frozenset(cyc) for cyc, _ in before.boundary_circles}
    for cyc, _ in after.boundary_circles:
        if frozenset(cyc) in old:
            continue
        try:
            standard_position(after, cyc[0])
        except HandleError:
            continue
        return cyc[0]
    raise AssertionError("no split circle in standard position")


def carried_by_some_isomorphism(d1, m1, d2, m2) -> bool:
    return any(transports(iso, m1, m2) for iso in iter_isomorphisms(d1, d2))


# Canceling 1- and 2-handle layouts: two 1-handle feet, then a 2-handle whose
# endpoints interleave with the feet around the boundary.
CANCELING_LAYOUTS = {
    "disk": (models.d_disk, (("e0", F(1, 2)), ("e2", F(1, 3))), (("e1", F(1, 2)), ("e3", F(1, 2)))),
    "annulus": (models.d_ann, (("e1", F(1, 2)), ("e3", F(1, 2))), (("e2", F(1, 2)), ("e3", F(3, 4)))),
    "two_holes": (models.two_holes, (("e1", F(1, 2)), ("e3", F(1, 2))), (("e2", F(1, 2)), ("e3", F(3, 4)))),
}


def canceling_pair(name: str):
    """(start diagram, diagram after h1 and h2, composite map, the lambda- path)."""
    make, feet, ends = CANCELING_LAYOUTS[name]
    d = make()
    d1, m1 = attach_h1(d, *feet)
    over = Route(ends[0], tuple((foot_edge(d1, p), F(1, 2)) for p in feet), ends[1])
    around = Route(ends[0], (), ends[1])
    d2, m2, _ = attach_h2(d1, over, around)
    return d, d2, m2 @ m1, around


# ------------------------------------------------- random disjoint scripts
# Boundary edge groups for the two steps; chords (H2, CSTAB) only where they meet no curve.
DISJOINT_SETUPS = {
    "disk": (models.d_disk, (["e0", "e1"], ["e2", "e3"]), True),
    "annulus": (models.d_ann, (["e1"], ["e2"]), True),
    "two_holes": (models.two_holes, (["e0", "e1"], ["e2", "e3"]), False),
}


def _two_positions(rng: random.Random, edges: list[str]) -> list[tuple]:
    e1, e2 = rng.choice(edges), rng.choice(edges)
    if e1 == e2:
        a, b = sorted(rng.sample(range(1, 12), 2))
        return [(e1, F(a, 12)), (e1, F(b, 12))]
    return [(e1, F(rng.randrange(1, 12), 12)), (e2, F(rng.randrange(1, 12), 12))]


def _step(rng: random.Random, kind: str, pos: list[tuple]):
    if kind == "H0":
        return ContactHandle(0, sides=rng.choice([3, 4, 5]))
    if kind == "H1":
        return ContactHandle(1, positions=tuple(pos))
    if kind == "F1":
        return F1Attach(*pos)
    lam = Route(pos[0], (), pos[1])
    if kind == "H2":
        return ContactHandle(2, lam_plus=lam, lam_minus=lam)
    return CompoundStab(lam, rng.choice(["alpha", "beta"]))


def random_disjoint_case(rng: random.Random):
    """(start diagram, [step a, step b]) with the two steps on disjoint boundary edges."""
    name = rng.choice(sorted(DISJOINT_SETUPS))
    make, groups, chords = DISJOINT_SETUPS[name]
    pool = ["H0", "H1", "F1"] + (["H2", "CSTAB"] if chords else [])
    return make(), [_step(rng, rng.choice(pool), _two_positions(rng, g)) for g in groups]


def order_independent(d, steps) -> bool:
    d1, m1 = run_script(d, steps)
    d2, m2 = run_script(d, steps[::-1])
    return carried_by_some_isomorphism(d1, m1, d2, m2)


# ------------------------------------------------- random domains
def random_domain(rng: random.Random, d, x, y) -> Domain:
    """A domain from x to y: a connecting domain plus a random periodic combination."""
    base = find_connecting_domain(d, x, y)
    out = base.as_dict()
    for p in periodic_domain_basis(d):
        k = rng.randint(-2, 2)
        for r, m in p.mult:
            out[r] = out.get(r, 0) + k * m
    return Domain.make(out, tuple(x), tuple(y))


def index(d, dom: Domain) -> int:
    return maslov_index(d, dom)


def compound_stab(d, path, side):
    return compound_stabilize(d, path, side)


# ------------------------------------------------- hand-built fixtures
from sfkit.diagram_core import check  # noqa: E402
from sfkit.drawing import CurveSpec, Namer, disk_diagram, draw_curves, puncture, walk  # noqa: E402

HALF = F(1, 2)


def _holes(corners, tags=None):
    """Disk with one hole at each listed corner vertex of ``c0``; returns the diagram and the slits."""
    d = disk_diagram()
    namer = Namer(d)
    slits = []
    for i, v in enumerate(corners):
        before = {e.name for e in d.edges}
        d, _ = puncture(d, "c0", d.cell["c0"].verts.index(v), namer, tag=tags[i] if tags else None)
        slits += [e.name for e in d.edges if e.name not in before and e.kind == "ghost"]
    return d, slits


def around(d, slit, t=HALF):
    return walk(d, "c0", [(slit, t, 1)])


def only_alpha():
    """A hole with one alpha circle around it and no beta curve."""
    d, (slit,) = _holes(["v0"])
    return draw_curves(d, [CurveSpec("alpha", "a0", around(d, slit))]).diagram


def parallel_pair():
    """Disjoint parallel alpha and beta around one hole: no generators, one positive periodic domain."""
    d, (slit,) = _holes(["v0"])
    return draw_curves(d, [CurveSpec("alpha", "a0", around(d, slit, F(1, 3))),
                           CurveSpec("beta", "b0", around(d, slit, F(2, 3)))]).diagram


def hexagon_diagram():
    """Three holes with an alpha circle each and one beta dipping inside all three.

    The region inside beta and outside the alpha circles is a hexagon.
    """
    d, slits = _holes(["v0", "v1", "v2"])
    specs = [CurveSpec("alpha", f"a{i}", around(d, s)) for i, s in enumerate(slits)]
    specs.append(CurveSpec("beta", "b0", walk(d, "c0", [(s, F(3, 4), 1) for s in slits])))
    return draw_curves(d, specs).diagram


def punctured_bigons(count: int, tags=(None,)):
    """D_ann with ``count`` of its two bigons punctured once per entry of ``tags``."""
    d = models.d_ann()
    bigons = [r for r in d.regions if not r.touches_boundary][:count]
    namer = Namer(d)
    for r in bigons:
        cell = sorted(r.cells)[0]
        for tag in tags:
            d, _ = puncture(d, cell, 0, namer, tag=tag)
    return check(d)


def non_alternating_annulus_text() -> str:
    """annulus.sfd with curve edges reassigned so both crossings meet the curves in the order a, a, b, b."""
    from sfkit import data_path
    text = Path(data_path("annulus.sfd")).read_text()
    return text.replace("a0 alpha e7 e8 e9", "a0 alpha e7 e11 e9").replace("b0 beta e11 e12 e13", "b0 beta e8 e12 e13")
