"""Contact handle maps, the 4-dimensional 1- and 3-handle maps, and compound stabilization.

Every operation takes a diagram and returns the new diagram together with
the chain-level map on generators.  Surgery is done on the curve-free base
complex kept in the diagram's layout, and all curves are redrawn after each
step, so positions and paths are always written in base-complex terms:

* a boundary position is ``(edge, t)`` with ``t`` a fraction along the
  original boundary edge (edges split by earlier handles are resolved);
* a path is a :class:`~sfkit.drawing.Route` from one boundary position to
  another, listing the base edges it crosses.

Crossing points keep their names from step to step, which is what lets the
maps of consecutive steps compose by generator name.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .diagram_core import (DiagramError, SuturedDiagram, check, enumerate_generators, relative_gradings)
from .drawing import (Cross, CurveSpec, Layout, Namer, Route, attach_band, attach_tube, cap, cut_along_curve,
                      delete_curves, disk, flatten, lane_position, layout_namer, layout_of, make_feet,
                      puncture, render, route_steps)
from .flinalg import F2Matrix, compose

log = logging.getLogger(__name__)

# Lane of the new alpha and beta arcs on a 2-handle foot, measured along the
# counterclockwise traversal of the page-side cell.  With this choice the
# band point is the lower-graded of the two points a canceling 3-handle sees.
ALPHA_LANE = Fraction(2, 3)
BETA_LANE = Fraction(1, 3)
PARALLEL_GAP = Fraction(1, 997)


class HandleError(DiagramError):
    pass


@dataclass(frozen=True)
class ContactHandle:
    index: int
    positions: tuple = ()          # index 1: two boundary positions
    lam_plus: Route | None = None  # index 2: path avoiding beta
    lam_minus: Route | None = None  # index 2: path avoiding alpha
    circle: str | None = None      # index 3: a boundary edge of the circle
    sides: int = 4                 # index 0: number of boundary edges of the new disk


@dataclass(frozen=True)
class F1Attach:
    """4-dimensional 1-handle; positions are boundary positions or ``(cell, corner)`` pairs."""
    p1: tuple
    p2: tuple


@dataclass(frozen=True)
class F3Collapse:
    alpha: str
    beta: str


@dataclass(frozen=True)
class CompoundStab:
    path: Route
    side: str = "alpha"


@dataclass(frozen=True)
class HandleScript:
    steps: tuple = field(default_factory=tuple)


@dataclass
class StepResult:
    diagram: SuturedDiagram
    matrix: F2Matrix
    info: dict = field(default_factory=dict)


# --------------------------------------------------------------- helpers
def _gens(d: SuturedDiagram) -> list[tuple]:
    return enumerate_generators(d)


def _extend_map(d_old: SuturedDiagram, d_new: SuturedDiagram, new_points: Sequence[str]) -> F2Matrix:
    """x -> x together with the given points."""
    old = _gens(d_old)
    new = _gens(d_new)
    known = set(new)
    images = {}
    for x in old:
        y = tuple(sorted(set(x) | set(new_points)))
        if y not in known:
            raise HandleError(f"generator {x} has no image {y}: point names were not preserved")
        images[x] = [y]
    return F2Matrix.from_images(old, new, images)


def _point_key(keys: dict, a: tuple, b: tuple) -> str:
    key = ("c",) + tuple(sorted((a, b)))
    if key not in keys:
        raise HandleError("expected crossing of the new curves was not created")
    return keys[key]


def _remove_curves(lay: Layout, curves: set) -> Layout:
    specs = tuple(s for s in lay.specs if s.curve not in curves)
    in_base = {e.curve for e in lay.base.edges if e.curve} & curves
    base = delete_curves(lay.base, in_base) if in_base else lay.base
    return Layout(base, specs, dict(lay.names), dict(lay.pieces))


def _render_checked(lay: Layout, what: str) -> SuturedDiagram:
    try:
        return render(lay)
    except DiagramError as exc:
        raise HandleError(f"{what}: {exc}") from exc


def _extremal_pair(d: SuturedDiagram, p: str, q: str) -> tuple[str, str]:
    """(higher, lower) of two points on a lone alpha/beta pair, by relative Maslov grading."""
    others = {e.curve for e in d.edges if e.curve} - set(d.point_curves(p).values())
    sub = delete_curves(d, others)
    gr = relative_gradings(sub, (p,), (q,))
    if gr is None:
        raise HandleError("the two points are not connected by a domain")
    if gr[0] == 0:
        raise HandleError("grading tie")
    return (p, q) if gr[0] > 0 else (q, p)


# ------------------------------------------------------------ index 0, 1
def attach_h0(d: SuturedDiagram, sides: int = 4) -> tuple[SuturedDiagram, F2Matrix]:
    lay = layout_of(d)
    namer = layout_namer(d)
    cells, edges = disk(namer, sides)
    base = SuturedDiagram(lay.base.cells + tuple(cells), lay.base.edges + tuple(edges), lay.base.orientation)
    new = render(Layout(base, lay.specs, dict(lay.names), dict(lay.pieces)))
    return new, _extend_map(d, new, ())


def attach_h1(d: SuturedDiagram, p1: tuple, p2: tuple) -> tuple[SuturedDiagram, F2Matrix]:
    if (p1[0], Fraction(p1[1])) == (p2[0], Fraction(p2[1])):
        raise HandleError("1-handle feet coincide")
    lay = layout_of(d)
    namer = layout_namer(d)
    lay, (f1, f2) = make_feet(lay, [p1, p2], namer)
    base, _ = attach_band(lay.base, f1, f2, namer)
    new = _render_checked(replace(lay, base=base), "1-handle")
    return new, _extend_map(d, new, ())


def foot_edge(d: SuturedDiagram, pos: tuple) -> str:
    """Base edge of the handle foot covering an original boundary position ``(edge, t)``."""
    lay = layout_of(d)
    t = Fraction(pos[1])
    for piece, (orig, lo, hi) in lay.pieces.items():
        if orig == pos[0] and lo < t < hi:
            if lay.base.edge[piece].kind == "boundary":
                raise HandleError(f"no handle foot at {pos[0]}@{t}")
            return piece
    raise HandleError(f"no handle foot at {pos[0]}@{t}")


# -------------------------------------------------------------- index 2
def _band_curve(base: SuturedDiagram, band: str, f1: str, f2: str, route: Route, lane) -> list[Cross]:
    (c1, _, s1), = [u for u in base.uses[f1] if u[0] != band]
    (c2, _, s2), = [u for u in base.uses[f2] if u[0] != band]
    (_, _, b1), = [u for u in base.uses[f1] if u[0] == band]
    t1 = lane_position(base, f1, c1, lane)
    t2 = lane_position(base, f2, c2, lane)
    steps, end = route_steps(base, c1, route.crossings)
    if end != c2:
        raise HandleError("2-handle path does not reach its second endpoint")
    return [Cross(f1, b1, t1)] + steps + [Cross(f2, s2, t2)]


def attach_h2(d: SuturedDiagram, lam_plus: Route, lam_minus: Route,
              mirrored: bool = False) -> tuple[SuturedDiagram, F2Matrix, str]:
    """Band at the shared endpoints of the two paths; alpha' follows lam_minus, beta' follows lam_plus.

    ``mirrored`` swaps the two lanes on the feet.  This is the handle seen
    from the other side of the surface, as when a 1-handle cobordism is
    turned around and its handle is glued back on as a 2-handle.
    """
    if (lam_plus.start, lam_plus.end) != (lam_minus.start, lam_minus.end):
        raise HandleError("the two 2-handle paths must share their endpoints")
    lay = layout_of(d)
    namer = layout_namer(d)
    lay, (f1, f2) = make_feet(lay, [lam_plus.start, lam_plus.end], namer)
    base, band = attach_band(lay.base, f1, f2, namer)
    a_id, b_id = namer("a"), namer("b")
    a_lane, b_lane = (BETA_LANE, ALPHA_LANE) if mirrored else (ALPHA_LANE, BETA_LANE)
    a_steps = _band_curve(base, band, f1, f2, lam_minus, a_lane)
    b_steps = _band_curve(base, band, f1, f2, lam_plus, b_lane)
    # where the two paths share a crossing, alpha' runs just to the right of beta'
    taken = {(st.edge, st.t) for st in b_steps}
    a_steps = [Cross(st.edge, st.sign, st.t - PARALLEL_GAP if st.sign > 0 else st.t + PARALLEL_GAP)
               if (st.edge, st.t) in taken else st for st in a_steps]
    specs = lay.specs + (CurveSpec("alpha", a_id, tuple(a_steps)), CurveSpec("beta", b_id, tuple(b_steps)))
    try:
        new = render(Layout(base, specs, dict(lay.names), dict(lay.pieces)))
    except DiagramError as exc:
        msg = str(exc)
        if "same family" in msg or "one family" in msg or "own family" in msg:
            raise HandleError(f"2-handle path crosses a curve it must avoid: {msg}") from exc
        raise HandleError(f"2-handle: {msg}") from exc
    c = _point_key(new.layout.names, (a_id, 0), (b_id, 0))
    log.debug("2-handle point %s", c)
    return new, _extend_map(d, new, (c,)), c


# -------------------------------------------------------------- index 3
def standard_position(d: SuturedDiagram, circle_edge: str) -> tuple[str, str, str, str]:
    """(alpha id, beta id, point x, point y) parallel to the boundary circle, or HandleError."""
    if circle_edge not in d.edge or d.edge[circle_edge].kind != "boundary":
        raise HandleError(f"{circle_edge} is not a boundary edge")
    reg = d.region[d.region_of(d.uses[circle_edge][0][0])]
    circ = list(d.boundary_circles[d.circle_of_edge(circle_edge)][0])
    fail = HandleError("not in standard position")
    if reg.chi != 0 or len(reg.boundary_word) != 2:
        raise fail
    inner = [cyc for cyc in reg.boundary_word if not {e for e, _ in cyc} <= set(circ)]
    if len(inner) != 1:
        raise fail
    cyc = inner[0]
    kinds = [d.edge[e].kind for e, _ in cyc]
    changes = [i for i in range(len(cyc)) if kinds[i] != kinds[i - 1]]
    if len(changes) != 2 or sorted(set(kinds)) != ["alpha", "beta"]:
        raise fail
    a_id = next(d.edge[e].curve for e, _ in cyc if d.edge[e].kind == "alpha")
    b_id = next(d.edge[e].curve for e, _ in cyc if d.edge[e].kind == "beta")
    if {d.edge[e].curve for e, _ in cyc} != {a_id, b_id}:
        raise fail
    pts = set(d.curve_points(a_id))
    if len(pts) != 2 or set(d.curve_points(b_id)) != pts:
        raise fail
    x, y = sorted(pts)
    return a_id, b_id, x, y


def attach_h3(d: SuturedDiagram, circle_edge: str) -> tuple[SuturedDiagram, F2Matrix]:
    a_id, b_id, x, y = standard_position(d, circle_edge)
    capped, _ = cap(flatten(d), circle_edge)
    high, low = _extremal_pair(capped.reversed(), x, y)
    lay = _remove_curves(layout_of(d), {a_id, b_id})
    namer = layout_namer(d)
    base, _ = cap(lay.base, circle_edge, namer)
    new = render(replace(lay, base=base))
    old = _gens(d)
    new_gens = set(_gens(new))
    images = {}
    for g in old:
        if high in g:
            images[g] = []
        else:
            y_gen = tuple(p for p in g if p != low)
            if y_gen not in new_gens:
                raise HandleError(f"generator {g} has no image after capping")
            images[g] = [y_gen]
    return new, F2Matrix.from_images(old, sorted(new_gens), images)


# ---------------------------------------------- 4-dimensional handles
def _is_corner(lay: Layout, pos: tuple) -> bool:
    return isinstance(pos[1], int) and pos[0] in lay.base.cell


def _hole_at(lay: Layout, pos: tuple, namer: Namer, render_check: bool = True,
             foot: str | None = None) -> tuple[Layout, str]:
    """Puncture the base next to a boundary position (or its already cut ``foot``) or at a (cell, corner)."""
    if _is_corner(lay, pos):
        cell, corner = pos
    else:
        if foot is None:
            lay, (foot,) = make_feet(lay, [pos], namer)
        (cell, corner, _), = lay.base.uses[foot]
    base, hole = puncture(lay.base, cell, corner, namer)
    lay2 = replace(lay, base=base)
    if render_check:
        drawn = render(lay2)
        reg = drawn.region[drawn.region_of(drawn.uses[hole][0][0])]
        outer = [cyc for cyc in reg.boundary_word
                 if {drawn.edge[e].kind for e, _ in cyc} == {"boundary"} and hole not in {e for e, _ in cyc}]
        if not outer:
            raise HandleError("position lies in a region that does not touch the boundary")
    return lay2, hole


def _f1_tube(d: SuturedDiagram, p1: tuple, p2: tuple):
    lay = layout_of(d)
    namer = layout_namer(d)
    feet: list = [None, None]
    if not _is_corner(lay, p1) and not _is_corner(lay, p2):
        # cut both feet at once so the first cut cannot land on the second position
        lay, feet = make_feet(lay, [p1, p2], namer)
    lay, h1 = _hole_at(lay, p1, namer, foot=feet[0])
    lay, h2 = _hole_at(lay, p2, namer, foot=feet[1])
    base, tube, seam = attach_tube(lay.base, h1, h2, namer)
    return replace(lay, base=base), namer, h1, h2, seam


# Three pairwise isotopic meridians of the tube, any two meeting twice.
def _meridian(kind: str, cid: str, seam: str, h1: str, h2: str) -> CurveSpec:
    if kind == "alpha":
        steps = (Cross(seam, 1, Fraction(1, 2)),)
    elif kind == "beta":
        steps = (Cross(h1, -1, Fraction(2, 3)), Cross(h1, 1, Fraction(1, 3)), Cross(seam, 1, Fraction(3, 4)))
    else:
        steps = (Cross(h2, -1, Fraction(1, 3)), Cross(h2, 1, Fraction(2, 3)), Cross(seam, 1, Fraction(1, 4)))
    return CurveSpec(kind, cid, steps)


def attach_f1(d: SuturedDiagram, p1: tuple, p2: tuple) -> tuple[SuturedDiagram, F2Matrix, tuple[str, str]]:
    """Tube between two punctures with an isotopic alpha/beta pair meeting twice; x -> x * theta+."""
    lay, namer, h1, h2, seam = _f1_tube(d, p1, p2)
    a_id, b_id = namer("a"), namer("b")
    specs = (_meridian("alpha", a_id, seam, h1, h2), _meridian("beta", b_id, seam, h1, h2))
    new = render(replace(lay, specs=lay.specs + specs))
    p, q = sorted(set(new.curve_points(a_id)))
    top, bottom = _extremal_pair(new, p, q)
    return new, _extend_map(d, new, (top,)), (top, bottom)


def attach_f1_triple(t: SuturedDiagram, p1: tuple, p2: tuple) -> tuple[SuturedDiagram, dict]:
    """F1 on a triple diagram: one new curve of each family in the tube.

    Returns the new triple and, for each pair of families, the (top, bottom)
    points of the new curves.
    """
    lay, namer, h1, h2, seam = _f1_tube(t, p1, p2)
    ids = {k: namer(k[0]) for k in ("alpha", "beta", "gamma")}
    specs = tuple(_meridian(k, ids[k], seam, h1, h2) for k in ("alpha", "beta", "gamma"))
    new = render(replace(lay, specs=lay.specs + specs))
    thetas = {}
    for a, b in (("alpha", "beta"), ("beta", "gamma"), ("alpha", "gamma")):
        sub = new.pair(a, b)
        pts = sorted(set(sub.curve_points(ids[a])) & set(sub.curve_points(ids[b])))
        thetas[(a, b)] = _extremal_pair(sub, *pts)
    return new, thetas


def f3_configuration(d: SuturedDiagram, alpha: str, beta: str) -> tuple[str, str]:
    if d.curve_kind(alpha) != "alpha" or d.curve_kind(beta) != "beta":
        raise HandleError("F3 needs an alpha curve and a beta curve")
    pa, pb = d.curve_points(alpha), d.curve_points(beta)
    if len(pa) != 2 or sorted(pa) != sorted(pb):
        raise HandleError("configuration absent: the pair must meet each other twice and nothing else")
    p, q = sorted(pa)
    return _extremal_pair(d, p, q)


def map_f3(d: SuturedDiagram, alpha: str, beta: str) -> tuple[SuturedDiagram, F2Matrix]:
    """Remove the pair: x * theta- -> x, x * theta+ -> 0."""
    top, bottom = f3_configuration(d, alpha, beta)
    lay = _remove_curves(layout_of(d), {beta})
    flat = flatten(render(lay))
    namer = Namer(flat)
    base, left, right = cut_along_curve(flat, alpha, namer)
    base, _ = cap(base, left, namer)
    base, _ = cap(base, right, namer)
    new = render(Layout(base))
    try:
        check(new)
    except DiagramError as exc:
        raise HandleError(f"F3: {exc}") from exc
    old = _gens(d)
    new_gens = set(_gens(new))
    images = {}
    for g in old:
        if top in g:
            images[g] = []
        else:
            y = tuple(p for p in g if p != bottom)
            if y not in new_gens:
                raise HandleError(f"generator {g} has no image")
            images[g] = [y]
    return new, F2Matrix.from_images(old, sorted(new_gens), images)


def _stabilize(d: SuturedDiagram, path: Route, side: str, translate: bool):
    if side not in ("alpha", "beta"):
        raise HandleError(f"unknown side {side}")
    lay = layout_of(d)
    namer = layout_namer(d)
    lay, (f1, f2) = make_feet(lay, [path.start, path.end], namer)
    holes = []
    for foot in (f1, f2):
        (cell, corner, _), = lay.base.uses[foot]
        base, hole = puncture(lay.base, cell, corner, namer)
        lay = replace(lay, base=base)
        holes.append(hole)
    h1, h2 = holes
    base, tube, seam = attach_tube(lay.base, h1, h2, namer)
    (c1, _, _), = base.uses[f1]
    (c2, _, _), = base.uses[f2]
    back, end = route_steps(base, c2, path.reversed().crossings)
    if end != c1:
        raise HandleError("stabilization path does not connect its endpoints")
    other = "beta" if side == "alpha" else "alpha"
    lon_id, mer_id = namer(side[0]), namer(other[0])
    lon = CurveSpec(side, lon_id, tuple([Cross(h2, -1, Fraction(1, 2))] + back + [Cross(h1, 1, Fraction(1, 2))]))
    mer = CurveSpec(other, mer_id, (Cross(seam, 1, Fraction(1, 2)),))
    specs = lay.specs + (lon, mer)
    ids = {"longitude": lon_id, "meridian": mer_id}
    if translate:
        # a finger-translate of the meridian, crossing the longitude once beside hole 2
        tr_id = namer("g")
        specs += (CurveSpec("gamma", tr_id, (Cross(h2, -1, Fraction(1, 3)), Cross(h2, 1, Fraction(2, 3)),
                                             Cross(seam, 1, Fraction(1, 4)))),)
        ids["translate"] = tr_id
    try:
        new = render(Layout(base, specs, dict(lay.names), dict(lay.pieces)))
    except DiagramError as exc:
        raise HandleError(f"stabilization path crosses a forbidden curve: {exc}") from exc
    c = _point_key(new.layout.names, (lon_id, 0), (mer_id, 0))
    return new, c, ids


def compound_stabilize(d: SuturedDiagram, path: Route, side: str = "alpha") -> tuple[SuturedDiagram, F2Matrix, str]:
    """Tube along ``path``; the longitude follows the path back, the meridian meets it once at c."""
    new, c, _ = _stabilize(d, path, side, False)
    return new, _extend_map(d, new, (c,)), c


def compound_stabilize_triple(t: SuturedDiagram, path: Route) -> tuple[SuturedDiagram, dict]:
    """Alpha-side stabilization of a triple whose gamma curves translate its beta curves.

    The new gamma curve is a translate of the new meridian.  Returns the
    triple and the points c (alpha-beta), c' (alpha-gamma) and the
    (top, bottom) pair of the meridian and its translate.
    """
    new, c, ids = _stabilize(t, path, "alpha", True)
    lon, mer, tr = ids["longitude"], ids["meridian"], ids["translate"]
    (c2,) = set(new.curve_points(lon)) & set(new.curve_points(tr))
    pts = sorted(set(new.curve_points(mer)) & set(new.curve_points(tr)))
    top, bottom = _extremal_pair(new.pair("beta", "gamma"), *pts)
    return new, {"c": c, "c_prime": c2, "theta": (top, bottom)}


# ------------------------------------------------------------ scripts
def apply_step(d: SuturedDiagram, step) -> tuple[SuturedDiagram, F2Matrix]:
    if isinstance(step, ContactHandle):
        if step.index == 0:
            return attach_h0(d, step.sides)
        if step.index == 1:
            return attach_h1(d, *step.positions)
        if step.index == 2:
            new, m, _ = attach_h2(d, step.lam_plus, step.lam_minus)
            return new, m
        if step.index == 3:
            return attach_h3(d, step.circle)
        raise HandleError(f"no contact handle of index {step.index}")
    if isinstance(step, F1Attach):
        new, m, _ = attach_f1(d, step.p1, step.p2)
        return new, m
    if isinstance(step, F3Collapse):
        return map_f3(d, step.alpha, step.beta)
    if isinstance(step, CompoundStab):
        new, m, _ = compound_stabilize(d, step.path, step.side)
        return new, m
    raise HandleError(f"unknown script step {step!r}")


class ScriptError(HandleError):
    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


def run_script(d: SuturedDiagram, script) -> tuple[SuturedDiagram, F2Matrix]:
    steps = script.steps if isinstance(script, HandleScript) else tuple(script)
    gens = _gens(d)
    total = F2Matrix.identity(gens)
    for i, step in enumerate(steps):
        try:
            d, m = apply_step(d, step)
        except DiagramError as exc:
            raise ScriptError(i, str(exc)) from exc
        log.info("step %d: %s, %d generators", i, type(step).__name__, m.codomain and len(m.codomain))
        total = compose(m, total)
    return d, total
