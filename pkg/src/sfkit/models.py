"""Small worked examples: diagrams, triples and partial open books.

These are the fixed inputs of the test suite and the CLI data files.
Every constructor is deterministic, so point names are stable.
"""

from __future__ import annotations

from fractions import Fraction

from .diagram_core import Cell, DiagramError, Edge, SuturedDiagram, check
from .drawing import (CurveSpec, Namer, Route, disk_diagram, draw_curves, empty_diagram, flatten, puncture,
                      walk)
from .open_book import ArcBasis, PartialOpenBook
from .polygons import translate_pair

HALF = Fraction(1, 2)


def add_annular_pair(d: SuturedDiagram, cell: str, corner: int, a_id: str, b_id: str,
                     tag: str | None = None) -> SuturedDiagram:
    """Punch a hole at a corner of ``cell`` and surround it by an alpha and a beta curve meeting twice."""
    d = flatten(d)
    namer = Namer(d)
    before = {e.name for e in d.edges}
    d, hole = puncture(d, cell, corner, namer, tag=tag)
    slit, = [e.name for e in d.edges if e.name not in before and e.kind == "ghost"]
    d = draw_curves(d, [CurveSpec("alpha", a_id, walk(d, cell, [(slit, HALF, 1)]))]).diagram
    loop, = [e.name for e in d.edges if e.curve == a_id]
    hv = d.edge_ends(hole)[0]
    inner, = [e.name for e in d.edges if e.kind == "ghost" and hv in d.edge_ends(e.name)]
    start = [c.name for c in d.cells
             if any(s[0] == loop for s in c.sides) and not any(s[0] == hole for s in c.sides)][0]
    # beta dips across alpha, around the hole, and back out
    steps = walk(d, start, [(loop, Fraction(2, 3)), (inner, HALF, 1), (loop, Fraction(1, 3))])
    return check(draw_curves(d, [CurveSpec("beta", b_id, steps)]).diagram, balanced=False)


def d_disk() -> SuturedDiagram:
    """The product disk: no curves, one empty generator."""
    return disk_diagram()


def d_empty() -> SuturedDiagram:
    return empty_diagram()


def d_ann() -> SuturedDiagram:
    """Annulus with one alpha and one beta meeting in two points; zero differential."""
    return add_annular_pair(disk_diagram(), "c0", 0, "a0", "b0")


def two_holes() -> SuturedDiagram:
    """Two annular pairs side by side: four generators."""
    d = add_annular_pair(disk_diagram(), "c0", 0, "a0", "b0")
    corner = d.cell["c0"].verts.index("v2")
    return add_annular_pair(d, "c0", corner, "a1", "b1")


def unknot_four_basepoints() -> SuturedDiagram:
    """Planar unknot diagram with basepoints w, z, w, z as tagged boundary circles.

    The annulus pair splits the surface into four regions around its two
    points: the two bigons get a z puncture each, and the inner hole and
    the outer boundary are w.
    """
    d = d_ann()
    bigons = [r for r in d.regions if not r.touches_boundary]
    if len(bigons) != 2:
        raise DiagramError("unexpected annulus regions")
    namer = Namer(d)
    for r in bigons:
        cell = sorted(r.cells)[0]
        d, _ = puncture(d, cell, 0, namer, tag="z")
    tags = {}
    for i, (cyc, tag) in enumerate(d.boundary_circles):
        if tag is None:
            tags[i] = "w"
    return check(d.with_tags(tags))


def annulus_triple() -> SuturedDiagram:
    """(alpha, beta, beta') on the annulus; beta' is a small translate of beta."""
    return translate_pair(d_ann(), "beta")


def two_hole_triple() -> SuturedDiagram:
    return translate_pair(two_holes(), "beta")


def saddle_triple() -> SuturedDiagram:
    """Genus-0 triple whose (beta, gamma) sub-diagram is the four-basepoint unknot.

    alpha is a translate of the unknot's alpha curve, which becomes beta.
    """
    return translate_pair(unknot_four_basepoints(), "alpha")


def trace_triple() -> SuturedDiagram:
    """(alpha, beta, alpha') on the annulus: the third family translates the first."""
    t = translate_pair(d_ann(), "alpha")
    # translate_pair gives (alpha', alpha, beta); rotate the labels cyclically
    return t.relabel_kinds({"alpha": "gamma", "beta": "alpha", "gamma": "beta"})


# ------------------------------------------------------------- open books
def annulus_page() -> SuturedDiagram:
    """Annulus as two squares A and B glued in a ring."""
    cells = (Cell("A", ("p", "q", "r", "s"), (("e0a", 1), ("g1", 1), ("e1a", 1), ("g2", -1))),
             Cell("B", ("q", "p", "s", "r"), (("e0b", 1), ("g2", 1), ("e1b", 1), ("g1", -1))))
    edges = tuple(Edge(n, "boundary") for n in ("e0a", "e0b", "e1a", "e1b")) + \
        (Edge("g1", "ghost"), Edge("g2", "ghost"))
    return SuturedDiagram(cells, edges)


def product_open_book() -> PartialOpenBook:
    """S a disk and P empty: the product sutured ball."""
    return PartialOpenBook(disk_diagram(), frozenset(), ArcBasis(()), (), name="product")


def annulus_open_book(twist: int = 0) -> PartialOpenBook:
    """S an annulus, P a neighbourhood of one spanning arc, h the identity or a twist about the core.

    ``twist`` = +1 is the twist that a positive stabilization of the disk
    produces (a single-generator diagram); -1 is its inverse.
    """
    arc = Route(("e0a", HALF), (), ("e1a", HALF))
    if twist == 0:
        image = arc
    elif twist == 1:
        image = Route(("e0a", HALF), (("g2", HALF, -1), ("g1", HALF, -1)), ("e1a", HALF))
    elif twist == -1:
        image = Route(("e0a", HALF), (("g1", HALF, 1), ("g2", HALF, 1)), ("e1a", HALF))
    else:
        raise ValueError("twist must be -1, 0 or 1")
    name = {0: "annulus", 1: "annulus_plus", -1: "annulus_minus"}[twist]
    return PartialOpenBook(annulus_page(), frozenset({"A"}), ArcBasis((arc,)), (image,), name=name)


def shipped_open_books() -> dict:
    books = [product_open_book(), annulus_open_book(0), annulus_open_book(1), annulus_open_book(-1)]
    return {b.name: b for b in books}
