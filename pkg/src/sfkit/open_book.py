"""Partial open books, their sutured diagrams and contact classes.

A partial open book (S, P, h) is stored combinatorially:

* the page S is a curve-free polygon complex;
* P is a set of page cells;
* the basis arcs a_i are :class:`~sfkit.drawing.Route` objects inside P;
* the monodromy is recorded extensionally by the image route h(a_i) of
  each basis arc, with the same endpoints as a_i.

The diagram is the page with one band per basis arc standing in for the
second copy of P.  alpha_i runs along a_i and the band core; beta_i runs
along h(a_i) and a band lane pushed off the core, so the two meet once
inside the band at x_i.  The contact class is the product of the x_i.

The same class is also produced by running contact handle maps from the
empty diagram: 0-handles for the page cells, 1-handles for the glued
edges, and one 2-handle per basis arc.  The two diagrams are compared
through an explicit isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .contact_handles import ContactHandle, apply_step, compound_stabilize
from .diagram_core import DiagramError, SuturedDiagram, check, enumerate_generators, validate
from .differential import differential_matrix
from .drawing import (Cross, CurveSpec, Layout, Namer, Route, attach_band, empty_diagram, flatten, lane_position,
                      layout_of, make_feet, offset_route, render, resolve_boundary, route_steps)
from .flinalg import F2Matrix, F2Vector, compose, homology, homology_class_equal
from .isomorphism import find_isomorphism, map_generator

# Lanes on a band foot, along the counterclockwise traversal of the page cell.
ALPHA_CORE = Fraction(1, 2)
BETA_LANE = Fraction(1, 4)
# beta_i runs this far to the left of h(a_i) wherever the two share a position
PUSHOFF = Fraction(1, 1009)
# Side of tau, in cell orientation, on which the twist spirals run.  The page
# orientation of the open book is opposite to the cell orientation (the same
# mirror that makes beta_i start on the low side of the band core), so a
# right-handed twist of the page spirals on the left of tau here.
TWIST_SIDE = -1


class OpenBookError(DiagramError):
    pass


@dataclass(frozen=True)
class ArcBasis:
    arcs: tuple = ()


@dataclass(frozen=True)
class PartialOpenBook:
    page: SuturedDiagram
    sub_page: frozenset
    basis: ArcBasis
    images: tuple = ()
    name: str = field(default="", compare=False)

    @property
    def arcs(self) -> tuple:
        return self.basis.arcs


# ------------------------------------------------------------ chord geometry
def _item(item) -> tuple:
    if isinstance(item, Cross):
        return item.edge, item.t, item.sign
    return item[0], Fraction(item[1]), (item[2] if len(item) > 2 else None)


def _boundary_point(page: SuturedDiagram, pos) -> tuple[str, Fraction]:
    e, t = pos[0], Fraction(pos[1])
    if e not in page.edge or page.edge[e].kind != "boundary":
        raise OpenBookError(f"{e} is not a boundary edge of the page")
    if not 0 < t < 1:
        raise OpenBookError(f"position {t} on {e} is not inside the edge")
    (c, k, s), = page.uses[e]
    return c, k + (t if s > 0 else 1 - t)


def _trace(page: SuturedDiagram, route: Route) -> list[tuple]:
    """Chords of a route: (cell, entry coordinate, exit coordinate) on the cell perimeter."""
    cur, here = _boundary_point(page, route.start)
    chords = []
    for item in route.crossings:
        e, t, sign = _item(item)
        if e not in page.edge or page.edge[e].kind != "ghost":
            raise OpenBookError(f"route crosses {e}, which is not a glued edge of the page")
        ks = [k for k, (name, s) in enumerate(page.cell[cur].sides) if name == e and (sign is None or s == sign)]
        if len(ks) != 1:
            raise OpenBookError(f"cannot leave cell {cur} through {e} unambiguously")
        k = ks[0]
        s = page.cell[cur].sides[k][1]
        u = t if s > 0 else 1 - t
        if not 0 < u < 1:
            raise OpenBookError(f"position {t} on {e} is not inside the edge")
        chords.append((cur, here, k + u))
        cur, j = page.partner(cur, k)
        here = j + 1 - u
    end, there = _boundary_point(page, route.end)
    if end != cur:
        raise OpenBookError("route does not reach its end point")
    chords.append((cur, here, there))
    return chords


def _ccw(x, a, n) -> Fraction:
    return (x - a) % n


def _crossing(chord1, chord2, n) -> bool:
    """Whether two chords of one n-gon cross; shared endpoints are an error."""
    (a, b), (c, d) = chord1, chord2
    if len({a, b, c, d}) < 4:
        raise OpenBookError("two arcs meet at a point of a cell boundary")
    span = _ccw(b, a, n)
    return (_ccw(c, a, n) < span) != (_ccw(d, a, n) < span)


def _count_meetings(page: SuturedDiagram, ch1: list, ch2: list) -> int:
    hits = 0
    for c1, a, b in ch1:
        for c2, c, d in ch2:
            if c1 == c2 and _crossing((a, b), (c, d), len(page.cell[c1].sides)):
                hits += 1
    return hits


def _embedded(page: SuturedDiagram, chords: list, what: str) -> None:
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            if _count_meetings(page, [chords[i]], [chords[j]]):
                raise OpenBookError(f"{what} is not embedded")


# ------------------------------------------------------------- validation
def _cut_components(page: SuturedDiagram, sub: frozenset, arc_chords: list) -> tuple[int, list[int]]:
    """Cut P along the arcs; returns (component count, runs of boundary(P) minus boundary(S) per component)."""
    ends: dict = {c: {} for c in sub}
    for chords in arc_chords:
        for c, a, b in chords:
            ends[c][a] = b
            ends[c][b] = a
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    nxt_point: dict = {}
    for c in sub:
        n = len(page.cell[c].sides)
        pts = sorted(set(ends[c]) | {Fraction(k) for k in range(n)})
        for i, p in enumerate(pts):
            q = pts[i + 1] if i + 1 < len(pts) else Fraction(n)
            nxt_point[(c, p)] = q
            # the face continues past q, jumping along a chord if one ends there
            q0 = q % n
            union((c, p), (c, ends[c].get(q0, q0)))
    for c in sub:
        n = len(page.cell[c].sides)
        for k, (e, _) in enumerate(page.cell[c].sides):
            if page.edge[e].kind != "ghost":
                continue
            c2, j = page.partner(c, k)
            if c2 not in sub:
                continue
            p = Fraction(k)
            while p < k + 1:
                q = nxt_point[(c, p)]
                union((c, p), (c2, j + 1 - (q - k)))
                p = q
    roots = {find(x) for x in list(nxt_point)}

    def on_dp(c, k):
        e = page.cell[c].sides[k][0]
        return page.edge[e].kind == "boundary" or page.partner(c, k)[0] not in sub

    def inner(c, k):
        return page.edge[page.cell[c].sides[k][0]].kind == "ghost"

    def step(c, k):
        n = len(page.cell[c].sides)
        k = (k + 1) % n
        while not on_dp(c, k):
            c, j = page.partner(c, k)
            k = (j + 1) % len(page.cell[c].sides)
        return c, k

    runs = {r: 0 for r in roots}
    seen: set = set()
    for c in sorted(sub):
        for k in range(len(page.cell[c].sides)):
            if (c, k) in seen or not on_dp(c, k):
                continue
            circle = [(c, k)]
            seen.add((c, k))
            cur = step(c, k)
            while cur != (c, k):
                circle.append(cur)
                seen.add(cur)
                cur = step(*cur)
            flags = [inner(*x) for x in circle]
            for i, x in enumerate(circle):
                if flags[i] and (not flags[i - 1] or all(flags) and i == 0):
                    runs[find((x[0], Fraction(x[1])))] += 1
    return len(roots), list(runs.values())


def _euler_of_cells(page: SuturedDiagram, cells) -> int:
    verts = {v for c in cells for v in page.cell[c].verts}
    edges = {e for c in cells for e, _ in page.cell[c].sides}
    return len(verts) - len(edges) + len(cells)


def check_open_book(pob: PartialOpenBook) -> None:
    """Raise OpenBookError naming the first failed condition."""
    page = pob.page
    if any(e.kind not in ("ghost", "boundary") for e in page.edges):
        raise OpenBookError("the page must not carry curves")
    if any(c.genus for c in page.cells):
        raise OpenBookError("page cells must be polygons")
    problems = validate(page, balanced=False)
    if problems:
        raise OpenBookError(f"page: {problems[0]}")
    if not page.cells or len(page.components) != 1:
        raise OpenBookError("the page must be a connected surface")
    sub = frozenset(pob.sub_page)
    if not sub <= set(page.cell):
        raise OpenBookError(f"unknown cells in P: {sorted(sub - set(page.cell))}")
    arcs, images = pob.arcs, pob.images
    if len(images) != len(arcs):
        raise OpenBookError("every basis arc needs exactly one monodromy image")
    arc_chords = []
    for i, arc in enumerate(arcs):
        chords = _trace(page, arc)
        if any(c not in sub for c, _, _ in chords):
            raise OpenBookError(f"basis arc {i} leaves P")
        if Fraction(arc.start[1]) == Fraction(arc.end[1]) and arc.start[0] == arc.end[0]:
            raise OpenBookError(f"basis arc {i} has coinciding ends")
        _embedded(page, chords, f"basis arc {i}")
        arc_chords.append(chords)
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if _count_meetings(page, arc_chords[i], arc_chords[j]):
                raise OpenBookError(f"basis arcs {i} and {j} intersect, so a_i and b_j do not meet in delta_ij points")
    image_chords = []
    for i, (arc, img) in enumerate(zip(arcs, images)):
        if (img.start[0], Fraction(img.start[1]), img.end[0], Fraction(img.end[1])) != \
                (arc.start[0], Fraction(arc.start[1]), arc.end[0], Fraction(arc.end[1])):
            raise OpenBookError(f"monodromy must fix the ends of basis arc {i}")
        chords = _trace(page, img)
        _embedded(page, chords, f"monodromy image {i}")
        image_chords.append(chords)
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if _count_meetings(page, image_chords[i], image_chords[j]):
                raise OpenBookError(f"monodromy images {i} and {j} intersect")
    if not sub:
        return
    n_comp, runs = _cut_components(page, sub, arc_chords)
    if n_comp != _euler_of_cells(page, sub) + len(arcs) or any(r != 1 for r in runs):
        raise OpenBookError("cutting P along the basis does not leave disks each holding one arc of the boundary of P "
                            "away from the boundary of S")


# ------------------------------------------------------------- the diagram
def _band_loop(base: SuturedDiagram, band: str, f1: str, f2: str, crossings, lane) -> list[Cross]:
    (c1, _, _), = [u for u in base.uses[f1] if u[0] != band]
    (c2, _, s2), = [u for u in base.uses[f2] if u[0] != band]
    (_, _, b1), = [u for u in base.uses[f1] if u[0] == band]
    steps, end = route_steps(base, c1, crossings)
    if end != c2:
        raise OpenBookError("arc does not reach its second end")
    return ([Cross(f1, b1, lane_position(base, f1, c1, lane))] + steps
            + [Cross(f2, s2, lane_position(base, f2, c2, lane))])


def build(pob: PartialOpenBook) -> tuple[SuturedDiagram, list[str]]:
    """The diagram of the open book and the points x_i, in basis order."""
    check_open_book(pob)
    page = flatten(pob.page)
    namer = Namer(page)
    ends = [p for arc in pob.arcs for p in (arc.start, arc.end)]
    lay, feet = make_feet(Layout(page), ends, namer)
    base = lay.base
    specs, pairs = [], []
    for i, (arc, img) in enumerate(zip(pob.arcs, pob.images)):
        f1, f2 = feet[2 * i], feet[2 * i + 1]
        base, band = attach_band(base, f1, f2, namer)
        a_id, b_id = namer("a"), namer("b")
        shifted = offset_route(pob.page, img, -PUSHOFF)
        specs.append(CurveSpec("alpha", a_id, tuple(_band_loop(base, band, f1, f2, arc.crossings, ALPHA_CORE))))
        specs.append(CurveSpec("beta", b_id, tuple(_band_loop(base, band, f1, f2, shifted.crossings, BETA_LANE))))
        pairs.append((a_id, b_id))
    try:
        d = render(Layout(base, tuple(specs), {}, dict(lay.pieces)))
        check(d)
    except DiagramError as exc:
        raise OpenBookError(f"open book diagram: {exc}") from exc
    points = []
    for a_id, b_id in pairs:
        key = ("c",) + tuple(sorted(((a_id, 0), (b_id, 0))))
        if key not in d.layout.names:
            raise OpenBookError("alpha_i and beta_i do not meet inside their band")
        points.append(d.layout.names[key])
    return d, points


def to_diagram(pob: PartialOpenBook) -> SuturedDiagram:
    return build(pob)[0]


def eh_data(pob: PartialOpenBook) -> tuple[SuturedDiagram, F2Vector]:
    d, points = build(pob)
    gen = tuple(sorted(points))
    gens = enumerate_generators(d)
    if gen not in gens:
        raise OpenBookError("x_1 ... x_k is not a generator")
    vec = F2Vector.from_labels(gens, [gen])
    cx = differential_matrix(d.reversed())
    if not cx.differential.apply(F2Vector.from_labels(cx.basis, [gen])).is_zero():
        raise OpenBookError("the contact generator is not a cycle")
    return d, vec


def eh_cycle(pob: PartialOpenBook) -> F2Vector:
    return eh_data(pob)[1]


# ------------------------------------------------------ the handle route
def _piece_at(lay: Layout, edge: str, t) -> str:
    t = Fraction(t)
    for p, (orig, lo, hi) in lay.pieces.items():
        if orig == edge and lo < t < hi:
            return p
    raise OpenBookError(f"no piece of {edge} at {t}")


def handle_data(pob: PartialOpenBook) -> tuple[SuturedDiagram, F2Vector, list]:
    """Run 0-, 1- and 2-handles from the empty diagram; returns (diagram, image of 1, steps)."""
    check_open_book(pob)
    page = pob.page
    d = empty_diagram()
    total = F2Matrix.identity([()])
    steps = []

    def run(step):
        nonlocal d, total
        d, m = apply_step(d, step)
        total = compose(m, total)
        steps.append(step)

    disk_of: dict = {}
    for cell in page.cells:
        before = {c.name for c in layout_of(d).base.cells}
        run(ContactHandle(0, sides=len(cell.sides)))
        new, = [c for c in layout_of(d).base.cells if c.name not in before]
        disk_of[cell.name] = [e for e, _ in new.sides]
    foot: dict = {}
    half = Fraction(1, 2)
    for e in sorted(x.name for x in page.edges if x.kind == "ghost"):
        (c1, k1, _), (c2, k2, _) = page.uses[e]
        p1, p2 = (disk_of[c1][k1], half), (disk_of[c2][k2], half)
        run(ContactHandle(1, positions=(p1, p2)))
        lay = layout_of(d)
        foot[(c1, k1)] = _piece_at(lay, *p1)
        foot[(c2, k2)] = _piece_at(lay, *p2)

    def on_disks(route: Route) -> Route:
        def point(pos):
            c, x = _boundary_point(page, pos)
            k = int(x)
            return disk_of[c][k], x - k
        items = []
        for c, _, x in _trace(page, route)[:-1]:
            k = int(x)
            u = x - k
            c2, j = page.partner(c, k)
            items += [(foot[(c, k)], u, 1), (foot[(c2, j)], 1 - u, -1)]
        return Route(point(route.start), tuple(items), point(route.end))

    for arc, img in zip(pob.arcs, pob.images):
        run(ContactHandle(2, lam_plus=on_disks(img), lam_minus=on_disks(arc)))
    return d, F2Vector.from_labels(total.codomain, total.image(())), steps


def eh_via_handles(pob: PartialOpenBook) -> F2Vector:
    return handle_data(pob)[1]


def eh_routes_agree(pob: PartialOpenBook) -> bool:
    """Whether the handle route and the open book route give the same class under the diagram isomorphism."""
    d_h, v_h, _ = handle_data(pob)
    d_o, v_o = eh_data(pob)
    iso = find_isomorphism(d_h, d_o)
    if iso is None:
        raise OpenBookError("the handle diagram is not isomorphic to the open book diagram")
    return {map_generator(iso, g) for g in v_h.labels()} == set(v_o.labels())


# --------------------------------------------------------- stabilization
def _twist_routes(page: SuturedDiagram, tau: list[Cross], routes: list[Route], spiral_side: int = 1) -> list[Route]:
    """Apply the right-handed Dehn twist along the closed curve ``tau`` to disjoint arcs.

    Each crossing of an arc with tau is replaced by a spiral: a full parallel
    copy of tau on its right-hand side plus one crossing of tau.  Spirals are
    nested by how far along tau they have travelled, so they stay disjoint.
    """
    n = len(tau)
    # chord m of tau sits in cells[m], from entry[m] to exit_[m]
    cur, _ = _tau_start(page, tau)
    cells, entry, exit_ = [], [None] * n, []
    for m, st in enumerate(tau):
        k = [i for i, (name, s) in enumerate(page.cell[cur].sides) if name == st.edge and s == st.sign][0]
        u = st.t if st.sign > 0 else 1 - st.t
        cells.append(cur)
        exit_.append(k + u)
        cur, j = page.partner(cur, k)
        entry[(m + 1) % n] = j + 1 - u
    if cur != cells[0]:
        raise OpenBookError("twist curve does not close up")
    traces = [_trace(page, r) for r in routes]
    events = []  # (route, chord, tau chord, from right side, distance along tau chord, distance along arc chord)
    for r, chords in enumerate(traces):
        for q, (c, a, b) in enumerate(chords):
            for m in range(n):
                if cells[m] != c:
                    continue
                size = len(page.cell[c].sides)
                P, Q = entry[m], exit_[m]
                if not _crossing((a, b), (P, Q), size):
                    continue
                a_right = _ccw(a, P, size) < _ccw(Q, P, size)
                # whether the arc arrives from the side the spirals run on
                right = a_right == (spiral_side > 0)
                near = a if a_right else b
                along_arc = min(_ccw(P, a, size), _ccw(Q, a, size))
                events.append((r, q, m, right, _ccw(near, P, size), along_arc))
    if not events:
        return list(routes)
    position = {}
    for m in range(n):
        on_m = sorted((ev for ev in events if ev[2] == m), key=lambda ev: ev[4])
        for rank, ev in enumerate(on_m):
            position[ev] = m - 1 + Fraction(rank + 1, len(on_m) + 1)
    total = len(events)
    # keep every spiral between tau and the nearest other crossing of each edge
    eps = Fraction(1, 4)
    for m, st in enumerate(tau):
        others = {Fraction(_item(it)[1]) for r in routes for it in r.crossings if _item(it)[0] == st.edge}
        others |= {t.t for i, t in enumerate(tau) if t.edge == st.edge and i != m}
        if st.t in others:
            raise OpenBookError(f"the twist curve meets an arc on edge {st.edge}")
        gaps = [abs(x - st.t) for x in others] + [st.t, 1 - st.t]
        eps = min(eps, min(gaps) / (total + 1))
    offset = {}
    for m in range(n):
        order = sorted(events, key=lambda ev: (m - position[ev]) % n)
        for i, ev in enumerate(order):
            offset[(ev, m)] = eps * (total - i)

    def spiral(ev) -> list:
        _, _, m, right, _, _ = ev
        out = []
        if right:
            for i in range(n):
                mm = (m + i) % n
                st = tau[mm]
                d = offset[(ev, mm)]
                out.append((st.edge, st.t - spiral_side * d if st.sign > 0 else st.t + spiral_side * d, st.sign))
        else:
            for i in range(1, n + 1):
                mm = (m - i) % n
                st = tau[mm]
                d = offset[(ev, mm)]
                out.append((st.edge, st.t - spiral_side * d if st.sign > 0 else st.t + spiral_side * d, -st.sign))
        return out

    new_routes = []
    for r, route in enumerate(routes):
        items = []
        crossings = list(route.crossings)
        for q in range(len(traces[r])):
            here = sorted((ev for ev in events if ev[0] == r and ev[1] == q), key=lambda ev: ev[5])
            for ev in here:
                items += spiral(ev)
            if q < len(crossings):
                e, t, sign = _item(crossings[q])
                if sign is None:
                    c, _, x = traces[r][q]
                    sign = page.cell[c].sides[int(x)][1]
                items.append((e, t, sign))
        new_routes.append(Route(route.start, tuple(items), route.end))
    return new_routes


def _tau_start(page: SuturedDiagram, tau: list[Cross]) -> tuple[str, Fraction]:
    last = tau[-1]
    for c in page.cells:
        for k, (name, s) in enumerate(c.sides):
            if name == last.edge and s == last.sign:
                c2, j = page.partner(c.name, k)
                u = last.t if s > 0 else 1 - last.t
                return c2, j + 1 - u
    raise OpenBookError("twist curve leaves the page")


@dataclass(frozen=True)
class Stabilization:
    open_book: PartialOpenBook
    new_arc: int
    twist_curve: tuple


def stabilize_data(pob: PartialOpenBook, c: Route) -> Stabilization:
    check_open_book(pob)
    page = flatten(pob.page)
    chords = _trace(page, c)
    _embedded(page, chords, "the stabilization arc")
    namer = Namer(page)
    lay, (f1, f2) = make_feet(Layout(page), [c.start, c.end], namer)
    base, band = attach_band(lay.base, f1, f2, namer)

    def move(pos):
        try:
            return resolve_boundary(lay, pos[0], pos[1])
        except DiagramError as exc:
            raise OpenBookError(f"an arc ends where the new band is attached: {exc}") from exc

    def moved(route: Route) -> Route:
        return Route(move(route.start), tuple(route.crossings), move(route.end))

    arcs = [moved(a) for a in pob.arcs]
    images = [moved(h) for h in pob.images]
    (_, t1), (_, t2) = [(k, e) for k, (e, _) in enumerate(base.cell[band].sides) if base.edge[e].kind == "boundary"]
    half = Fraction(1, 2)
    cocore = Route((t1, half), (), (t2, half))
    moved_c = Route(move(c.start), tuple(c.crossings), move(c.end))
    (c1, _, _), = [u for u in base.uses[f1] if u[0] != band]
    inner = route_steps(base, c1, moved_c.crossings)[0]
    tau = _band_loop(base, band, f1, f2, [(s.edge, s.t, s.sign) for s in inner], half)
    twisted = _twist_routes(base, tau, images + [cocore], TWIST_SIDE)
    new = PartialOpenBook(base, frozenset(pob.sub_page) | {band}, ArcBasis(tuple(arcs + [cocore])),
                          tuple(twisted), name=f"{pob.name}+" if pob.name else "")
    check_open_book(new)
    return Stabilization(new, len(arcs), tuple(tau))


def positive_stabilize(pob: PartialOpenBook, c: Route) -> PartialOpenBook:
    return stabilize_data(pob, c).open_book


def stabilization_check(pob: PartialOpenBook, c: Route) -> dict:
    """Compare the stabilized contact class with the compound stabilization image x -> x times c.

    The compound stabilization runs along ``c`` on the open book diagram,
    with the beta curve as the longitude.  Returns the two diagrams, the
    isomorphism (or None) and whether the classes agree in homology.
    """
    d0, v0 = eh_data(pob)
    stab = positive_stabilize(pob, c)
    d1, v1 = eh_data(stab)
    d2, m, point = compound_stabilize(d0, c, "beta")
    image = m.apply(v0)
    iso = find_isomorphism(d1, d2)
    agree = None
    if iso is not None:
        mapped = F2Vector.from_labels(image.basis, [map_generator(iso, g) for g in v1.labels()])
        cx = differential_matrix(d2.reversed())
        agree = homology_class_equal(cx, mapped, image)
    rank1 = homology(differential_matrix(d1.reversed()))[0]
    rank2 = homology(differential_matrix(d2.reversed()))[0]
    return {"stabilized": d1, "compound": d2, "isomorphism": iso, "agree": agree,
            "ranks": (rank1, rank2), "point": point}
