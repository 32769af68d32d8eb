"""Surgery on polygon complexes and exact drawing of new curves.

New curves are described by the edges they cross.  Each crossing is a
step ``(cell, side index, position)``: the curve leaves ``cell`` through
that side at the given position (a fraction in (0, 1) measured along the
edge direction) and enters the cell on the other side.  Inside a cell the
curve is a straight chord.  Cells are realised as convex polygons inscribed
in a circle with rational coordinates, so chord crossings and their order
along each chord are computed exactly.

All curves added by one operation are drawn in a single call, which keeps
every step expressed in the names of the input diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .diagram_core import CURVE_KINDS, Cell, DiagramError, Edge, SuturedDiagram, check


class Namer:
    """Deterministic fresh names, avoiding everything already present."""

    def __init__(self, d: SuturedDiagram | None = None, extra: Iterable[str] = ()):
        self.used: set = set(extra)
        if d is not None:
            self.used |= {c.name for c in d.cells} | {e.name for e in d.edges} | set(d.vertices)
            self.used |= {e.curve for e in d.edges if e.curve}
        self.next: dict = {}

    def __call__(self, prefix: str) -> str:
        k = self.next.get(prefix, 0)
        while f"{prefix}{k}" in self.used:
            k += 1
        name = f"{prefix}{k}"
        self.next[prefix] = k + 1
        self.used.add(name)
        return name


def rebuild(d: SuturedDiagram, cells: dict, edges: dict) -> SuturedDiagram:
    return SuturedDiagram(tuple(cells[k] for k in sorted(cells)),
                          tuple(edges[k] for k in sorted(edges)), d.orientation)


def _parts(d: SuturedDiagram) -> tuple[dict, dict]:
    return dict(d.cell), dict(d.edge)


# ------------------------------------------------------------------ primitives
def disk(namer: Namer, sides: int = 4) -> tuple[list[Cell], list[Edge]]:
    verts = [namer("v") for _ in range(sides)]
    edges = [Edge(namer("e"), "boundary") for _ in range(sides)]
    return [Cell(namer("c"), tuple(verts), tuple((e.name, 1) for e in edges))], edges


def empty_diagram() -> SuturedDiagram:
    return SuturedDiagram((), ())


def disk_diagram(sides: int = 4) -> SuturedDiagram:
    cells, edges = disk(Namer(), sides)
    return SuturedDiagram(tuple(cells), tuple(edges))


def disjoint_union(d1: SuturedDiagram, d2: SuturedDiagram) -> tuple[SuturedDiagram, dict]:
    """Union with d2 renamed away from d1; returns the rename map for d2 names."""
    namer = Namer(d1)
    ren: dict = {}

    def rn(name: str, prefix: str) -> str:
        if name not in ren:
            ren[name] = name if name not in namer.used else namer(prefix)
            namer.used.add(ren[name])
        return ren[name]

    for v in d2.vertices:
        rn(v, "v")
    edges = dict(d1.edge)
    curve_ren: dict = {}
    for e in d2.edges:
        cur = None
        if e.curve:
            if e.curve not in curve_ren:
                curve_ren[e.curve] = e.curve if e.curve not in namer.used else namer(e.curve.rstrip("0123456789") or "k")
                namer.used.add(curve_ren[e.curve])
            cur = curve_ren[e.curve]
        new = rn(e.name, "e")
        edges[new] = replace(e, name=new, curve=cur)
    cells = dict(d1.cell)
    for c in d2.cells:
        new = rn(c.name, "c")
        cells[new] = Cell(new, tuple(ren[v] for v in c.verts), tuple((ren[e], s) for e, s in c.sides), c.genus)
    ren.update({f"curve:{k}": v for k, v in curve_ren.items()})
    return rebuild(d1, cells, edges), ren


def split_boundary_edge(d: SuturedDiagram, e: str, pieces: int = 3,
                        namer: Namer | None = None) -> tuple[SuturedDiagram, list[str]]:
    """Subdivide a boundary edge; returns the pieces in edge direction."""
    namer = namer or Namer(d)
    if d.edge[e].kind != "boundary":
        raise DiagramError(f"{e} is not a boundary edge")
    (c, k, s), = d.uses[e]
    names = [e] + [namer("e") for _ in range(pieces - 1)]
    mids = [namer("v") for _ in range(pieces - 1)]
    tail, head = d.edge_ends(e)
    chain = [tail] + mids + [head]
    cell = d.cell[c]
    if s > 0:
        new_sides = [(n, 1) for n in names]
        new_verts = chain[:-1]
    else:
        new_sides = [(n, -1) for n in reversed(names)]
        new_verts = list(reversed(chain))[:-1]
    verts = cell.verts[:k] + tuple(new_verts) + cell.verts[k + 1:]
    sides = cell.sides[:k] + tuple(new_sides) + cell.sides[k + 1:]
    cells, edges = _parts(d)
    cells[c] = Cell(c, verts, sides, cell.genus)
    tag = d.edge[e].tag
    for n in names:
        edges[n] = Edge(n, "boundary", tag=tag)
    return rebuild(d, cells, edges), names


def attach_band(d: SuturedDiagram, e1: str, e2: str, namer: Namer | None = None) -> tuple[SuturedDiagram, str]:
    """Glue a square along two boundary edges with no common vertex; returns the band cell name."""
    namer = namer or Namer(d)
    if e1 == e2:
        raise DiagramError("band feet coincide")
    (c1, k1, s1), = d.uses[e1]
    (c2, k2, s2), = d.uses[e2]
    a0, a1 = d.cell[c1].side_ends(k1)
    b0, b1 = d.cell[c2].side_ends(k2)
    if {a0, a1} & {b0, b1}:
        raise DiagramError("band feet share a vertex")
    t1, t2, band = namer("e"), namer("e"), namer("c")
    cells, edges = _parts(d)
    cells[band] = Cell(band, (a1, a0, b1, b0), ((e1, -s1), (t1, 1), (e2, -s2), (t2, 1)))
    edges[e1] = Edge(e1, "ghost")
    edges[e2] = Edge(e2, "ghost")
    edges[t1] = Edge(t1, "boundary")
    edges[t2] = Edge(t2, "boundary")
    return rebuild(d, cells, edges), band


def puncture(d: SuturedDiagram, cell: str, corner: int = 0, namer: Namer | None = None,
             tag: str | None = None) -> tuple[SuturedDiagram, str]:
    """Remove a disk from a cell, joined to a corner by a ghost slit; returns the hole edge."""
    namer = namer or Namer(d)
    c = d.cell[cell]
    v = c.verts[corner]
    h, g, hole = namer("v"), namer("e"), namer("e")
    verts = c.verts[:corner] + (v, h, h) + c.verts[corner:]
    sides = c.sides[:corner] + ((g, 1), (hole, 1), (g, -1)) + c.sides[corner:]
    cells, edges = _parts(d)
    cells[cell] = Cell(cell, verts, sides, c.genus)
    edges[g] = Edge(g, "ghost")
    edges[hole] = Edge(hole, "boundary", tag=tag)
    return rebuild(d, cells, edges), hole


def attach_tube(d: SuturedDiagram, hole1: str, hole2: str, namer: Namer | None = None) -> tuple[SuturedDiagram, str, str]:
    """Glue an annulus between two one-edge boundary circles; returns (tube cell, seam edge)."""
    namer = namer or Namer(d)
    for hole in (hole1, hole2):
        (c, k, s), = d.uses[hole]
        a, b = d.cell[c].side_ends(k)
        if a != b or s != 1:
            raise DiagramError(f"{hole} is not a puncture loop")
    h1 = d.edge_ends(hole1)[0]
    h2 = d.edge_ends(hole2)[0]
    seam, tube = namer("e"), namer("c")
    cells, edges = _parts(d)
    cells[tube] = Cell(tube, (h1, h1, h2, h2), ((hole1, -1), (seam, 1), (hole2, -1), (seam, -1)))
    edges[hole1] = Edge(hole1, "ghost")
    edges[hole2] = Edge(hole2, "ghost")
    edges[seam] = Edge(seam, "ghost")
    return rebuild(d, cells, edges), tube, seam


def cap(d: SuturedDiagram, boundary_edge: str, namer: Namer | None = None) -> tuple[SuturedDiagram, str]:
    """Glue a disk onto the boundary circle through an edge."""
    namer = namer or Namer(d)
    walk = d.boundary_walk(boundary_edge)
    word = Cell("tmp", tuple(v for _, _, v in walk),
                tuple(d.cell[c].sides[k] for c, k, _ in walk))
    name = namer("c")
    capcell = replace(word.reversed(), name=name)
    cells, edges = _parts(d)
    cells[name] = capcell
    for e, _ in word.sides:
        edges[e] = Edge(e, "ghost")
    return rebuild(d, cells, edges), name


def delete_curves(d: SuturedDiagram, curves: Iterable[str]) -> SuturedDiagram:
    curves = set(curves)
    edges = tuple(Edge(e.name, "ghost") if e.curve in curves else e for e in d.edges)
    return SuturedDiagram(d.cells, edges, d.orientation)


def cut_along_curve(d: SuturedDiagram, curve: str, namer: Namer | None = None) -> tuple[SuturedDiagram, str, str]:
    """Cut the surface along a closed curve; returns boundary edges on its left and right copies."""
    namer = namer or Namer(d)
    cedges = d.curve_edges(curve)
    cells = {c.name: [list(c.verts), list(c.sides)] for c in d.cells}
    edges = dict(d.edge)
    # split vertices: corners on the right of the curve get a fresh vertex
    for i, e_out in enumerate(cedges):
        e_in = cedges[i - 1]
        v = d.edge_ends(e_out)[0]
        (comp, cyclic), = d.rotations[v]
        start = next(j for j, (c, k) in enumerate(comp) if d.cell[c].sides[k] == (e_out, 1))
        stop = next(j for j, (c, k) in enumerate(comp) if d.cell[c].sides[k] == (e_in, -1))
        n = len(comp)
        j = stop
        v2 = namer("v")
        while j != start:
            c, k = comp[j]
            cells[c][0][k] = v2
            j = (j + 1) % n
    right_names = {}
    for e in cedges:
        edges[e] = Edge(e, "boundary")
        right_names[e] = namer("e")
        edges[right_names[e]] = Edge(right_names[e], "boundary")
    for name, (verts, sides) in cells.items():
        for k, (e, s) in enumerate(sides):
            if e in right_names and s < 0:
                sides[k] = (right_names[e], s)
    new = {n: Cell(n, tuple(vs), tuple(ss), d.cell[n].genus) for n, (vs, ss) in cells.items()}
    return rebuild(d, new, edges), cedges[0], right_names[cedges[0]]


def relabel_vertices(d: SuturedDiagram, mapping: dict) -> SuturedDiagram:
    cells = tuple(Cell(c.name, tuple(mapping.get(v, v) for v in c.verts), c.sides, c.genus) for c in d.cells)
    return SuturedDiagram(cells, d.edges, d.orientation)


# ------------------------------------------------------------------- geometry
def _circle_point(s: Fraction) -> tuple[Fraction, Fraction]:
    den = 1 + s * s
    return (1 - s * s) / den, 2 * s / den


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _interleaved(a: int, b: int, c: int, d: int) -> bool:
    lo, hi = min(a, b), max(a, b)
    return (lo < c < hi) != (lo < d < hi)


@dataclass(frozen=True)
class Cross:
    """Leave the cell holding side (edge, sign) through that side at position t."""
    edge: str
    sign: int
    t: Fraction


@dataclass(frozen=True)
class CurveSpec:
    kind: str
    curve: str
    steps: tuple  # Cross records, or legacy (cell, side index, position) triples


@dataclass
class DrawResult:
    diagram: SuturedDiagram
    curve_vertices: dict = field(default_factory=dict)  # curve -> vertices in order of travel
    cell_points: dict = field(default_factory=dict)     # old cell -> crossing points created inside
    keys: dict = field(default_factory=dict)            # stable key -> new vertex name


def as_cross(d: SuturedDiagram, step) -> Cross:
    if isinstance(step, Cross):
        return Cross(step.edge, step.sign, Fraction(step.t))
    cell, side, t = step
    e, s = d.cell[cell].sides[side]
    return Cross(e, s, Fraction(t))


def side_index(d: SuturedDiagram, edge: str, sign: int) -> tuple[str, int]:
    for c, k, s in d.uses.get(edge, ()):
        if s == sign:
            return c, k
    raise DiagramError(f"no side ({edge}, {sign:+d})")


def draw_curves(d: SuturedDiagram, specs: Sequence[CurveSpec], namer: Namer | None = None,
                validate: bool = True, names: dict | None = None) -> DrawResult:
    """Draw closed curves given by their crossings; ``names`` reuses vertex names by stable key."""
    names = names or {}
    namer = namer or Namer(d, extra=names.values())
    existing = {e.curve for e in d.edges if e.curve}
    keys: dict = {}

    def fresh(key, prefix: str) -> str:
        wanted = names.get(key)
        if wanted is not None and wanted not in keys.values() and wanted not in d.cell \
                and wanted not in d.edge and wanted not in d.vertices:
            name = wanted
        else:
            name = namer(prefix)
        keys[key] = name
        return name

    on_edge: dict = {}          # edge -> {t: vertex name}
    slot_key: dict = {}         # (edge, t) -> key
    chords: dict = {}           # cell -> list of chord records
    for spec in specs:
        if spec.kind not in CURVE_KINDS:
            raise DiagramError(f"unknown curve kind {spec.kind}")
        if spec.curve in existing:
            raise DiagramError(f"curve id {spec.curve} already present")
        if not spec.steps:
            raise DiagramError(f"curve {spec.curve} crosses no edge")
        steps = [as_cross(d, st) for st in spec.steps]
        for i, st in enumerate(steps):
            if not 0 < st.t < 1:
                raise DiagramError(f"curve {spec.curve}: position {st.t} not inside the edge")
            if st.edge not in d.edge:
                raise DiagramError(f"curve {spec.curve}: unknown edge {st.edge}")
            ed = d.edge[st.edge]
            if ed.kind == "boundary":
                raise DiagramError(f"curve {spec.curve} would cross the boundary at {st.edge}")
            if ed.kind == spec.kind:
                raise DiagramError(f"curve {spec.curve} would cross its own family at {st.edge}")
            cell, side = side_index(d, st.edge, st.sign)
            slots = on_edge.setdefault(st.edge, {})
            if st.t in slots:
                raise DiagramError(f"two crossings at the same spot of {st.edge}")
            slots[st.t] = None
            slot_key[(st.edge, st.t)] = ("x", spec.curve, i)
            prev = steps[i - 1]
            entry_cell, entry_side = side_index(d, prev.edge, -prev.sign)
            if entry_cell != cell:
                raise DiagramError(f"curve {spec.curve}: step {i} does not start where step {i - 1} ends")
            chords.setdefault(cell, []).append(
                dict(spec=spec, index=i, entry=(entry_side, prev.t), exit=(side, st.t)))
    pieces: dict = {}
    for e, slots in on_edge.items():
        ts = sorted(slots)
        kind = d.edge[e].kind
        for t in ts:
            slots[t] = fresh(slot_key[(e, t)], "p" if kind in CURVE_KINDS else "v")
        pieces[e] = [e] + [namer("e") for _ in ts]
    cells_out = {c.name: c for c in d.cells if c.name not in chords and
                 not any(e in on_edge for e, _ in c.sides)}
    edges_out = {e.name: e for e in d.edges}
    for e, piece_names in pieces.items():
        for nm in piece_names:
            edges_out[nm] = replace(d.edge[e], name=nm)
    curve_points: dict = {spec.curve: {} for spec in specs}
    cell_points: dict = {}
    for c in d.cells:
        if c.name in cells_out:
            continue
        if c.genus and c.name in chords:
            raise DiagramError(f"cannot draw chords in cell {c.name} of positive genus")
        faces, created = _arrange_cell(d, c, chords.get(c.name, []), on_edge, pieces, namer,
                                       edges_out, curve_points, fresh)
        cell_points[c.name] = created
        for f in faces:
            cells_out[f.name] = f
    curve_vertices = {}
    for spec in specs:
        pts = curve_points[spec.curve]
        curve_vertices[spec.curve] = [pts[k] for k in sorted(pts)]
    out = rebuild(d, cells_out, edges_out)
    if validate:
        check(out, balanced=False)
    return DrawResult(out, curve_vertices, cell_points, keys)


def _arrange_cell(d, c: Cell, chords: list, on_edge: dict, pieces: dict, namer: Namer,
                  edges_out: dict, curve_points: dict, fresh):
    # boundary points in counterclockwise order: (u, key, vertex)
    bpts = []
    for k, (e, s) in enumerate(c.sides):
        bpts.append((Fraction(k), ("corner", k), c.verts[k]))
        for t, v in on_edge.get(e, {}).items():
            u = k + (t if s > 0 else 1 - t)
            bpts.append((u, ("cross", k, t), v))
    bpts.sort(key=lambda x: x[0])
    index = {b[1]: i for i, b in enumerate(bpts)}
    chord_list = []
    for ch in chords:
        a = index[("cross",) + ch["entry"]]
        b = index[("cross",) + ch["exit"]]
        chord_list.append((a, b, ch))
    for attempt in range(12):
        try:
            return _arrange_geometry(c, bpts, chord_list, attempt, on_edge, pieces, namer,
                                     edges_out, curve_points, fresh)
        except _Degenerate:
            continue
    raise DiagramError(f"could not place chords generically in cell {c.name}")


class _Degenerate(Exception):
    pass


def _piece_of_arc(c: Cell, key, on_edge: dict, pieces: dict) -> str:
    """Edge piece running from boundary point ``key`` to the next point counterclockwise."""
    k = key[1]
    e, s = c.sides[k]
    ts = sorted(on_edge.get(e, {}))
    names = pieces.get(e, [e])
    if key[0] == "corner":
        return names[0] if s > 0 else names[len(ts)]
    t = key[2]
    if s > 0:
        return names[sum(1 for x in ts if x <= t)]
    return names[sum(1 for x in ts if x < t)]


def _angle_key(dx, dy):
    return (0 if dy > 0 or (dy == 0 and dx > 0) else 1, _Slope(dx, dy))


class _Slope:
    def __init__(self, dx, dy):
        self.dx, self.dy = dx, dy

    def __lt__(self, other):
        return _cross(self.dx, self.dy, other.dx, other.dy) > 0

    def __eq__(self, other):
        return _cross(self.dx, self.dy, other.dx, other.dy) == 0


def _arrange_geometry(c, bpts, chord_list, attempt, on_edge, pieces, namer, edges_out, curve_points, fresh):
    npts = len(bpts)
    base = 7 + 4 * attempt
    coords = [_circle_point(Fraction(i) + Fraction(1, base + 3 * i + attempt * i * i)) for i in range(npts)]
    inter = []  # (chord i, chord j, point)
    params: dict = {i: [] for i in range(len(chord_list))}
    seen_pts: set = set()
    for i in range(len(chord_list)):
        a, b, chi = chord_list[i]
        for j in range(i + 1, len(chord_list)):
            p, q, chj = chord_list[j]
            if not _interleaved(a, b, p, q):
                continue
            if chi["spec"].kind == chj["spec"].kind:
                raise DiagramError(
                    f"curves {chi['spec'].curve} and {chj['spec'].curve} of one family would cross")
            (ax, ay), (bx, by) = coords[a], coords[b]
            (px, py), (qx, qy) = coords[p], coords[q]
            rx, ry = bx - ax, by - ay
            sx, sy = qx - px, qy - py
            den = _cross(rx, ry, sx, sy)
            ti = _cross(px - ax, py - ay, sx, sy) / den
            tj = _cross(px - ax, py - ay, rx, ry) / den
            pt = (ax + ti * rx, ay + ti * ry)
            if pt in seen_pts:
                raise _Degenerate()
            seen_pts.add(pt)
            params[i].append((ti, len(inter)))
            params[j].append((tj, len(inter)))
            inter.append((i, j, pt))
    inames = []
    for i, j, _ in inter:
        a = (chord_list[i][2]["spec"].curve, chord_list[i][2]["index"])
        b = (chord_list[j][2]["spec"].curve, chord_list[j][2]["index"])
        inames.append(fresh(("c",) + tuple(sorted((a, b))), "p"))

    def node_name(u):
        return bpts[u[1]][2] if u[0] == "b" else inames[u[1]]

    def coord(u):
        return coords[u[1]] if u[0] == "b" else inter[u[1]][2]

    outs: dict = {}
    half = []

    def add_half(u, v, name, sign, typ):
        outs.setdefault(u, []).append((v, name, sign, typ))
        half.append((u, v, name, sign, typ))

    for i in range(npts):
        j = (i + 1) % npts
        key = bpts[i][1]
        add_half(("b", i), ("b", j), _piece_of_arc(c, key, on_edge, pieces), c.sides[key[1]][1], "arc")
    for ci, (a, b, ch) in enumerate(chord_list):
        spec = ch["spec"]
        pts = sorted(params[ci])
        nodes = [("b", a)] + [("x", k) for _, k in pts] + [("b", b)]
        for u, v in zip(nodes, nodes[1:]):
            name = namer("e")
            edges_out[name] = Edge(name, spec.kind, spec.curve)
            add_half(u, v, name, 1, "chord")
            add_half(v, u, name, -1, "chord")
        for pos, (_, k) in enumerate(pts):
            curve_points[spec.curve][(ch["index"], pos + 1)] = inames[k]
        curve_points[spec.curve][(ch["index"], 10 ** 9)] = bpts[b][2]
    rot: dict = {}
    for u, lst in outs.items():
        if u[0] == "b":
            arcs = [o for o in lst if o[3] == "arc"]
            chs = [o for o in lst if o[3] == "chord"]
            if len(chs) > 1:
                raise DiagramError(f"cell {c.name}: two chords leave one boundary point")
            rot[u] = arcs + chs
        else:
            x0, y0 = coord(u)
            rot[u] = sorted(lst, key=lambda o: _angle_key(coord(o[0])[0] - x0, coord(o[0])[1] - y0))

    def next_half(h):
        u, v, name, sign, typ = h
        lst = rot[v]
        if v[0] == "b":
            if typ == "chord":
                return (v,) + lst[0]
            return (v,) + lst[-1]
        idx = lst.index((u, name, -sign, typ))
        return (v,) + lst[idx - 1]

    faces = []
    used = set()
    for h in half:
        if h in used:
            continue
        face = []
        cur = h
        while cur not in used:
            used.add(cur)
            face.append(cur)
            cur = next_half(cur)
        if cur != h:
            raise DiagramError(f"cell {c.name}: face tracing did not close")
        faces.append(face)
    expected = 1 + len(chord_list) + len(inter)
    if len(faces) != expected:
        raise DiagramError(f"cell {c.name}: arrangement produced {len(faces)} faces, expected {expected}")
    out = []
    for f in faces:
        keep = any(h[0] == ("b", 0) and h[4] == "arc" for h in f)
        name = c.name if keep else namer("c")
        out.append(Cell(name, tuple(node_name(h[0]) for h in f), tuple((h[2], h[3]) for h in f)))
    return out, inames


def route_steps(d: SuturedDiagram, start_cell: str, crossings: Sequence) -> tuple[list[Cross], str]:
    """Turn (edge, position[, sign]) crossings into Cross steps; returns them and the final cell."""
    steps = []
    cur = start_cell
    for item in crossings:
        if isinstance(item, Cross):
            e, t, sign = item.edge, item.t, item.sign
        else:
            e, t = item[0], Fraction(item[1])
            sign = item[2] if len(item) > 2 else None
        if e not in d.edge:
            raise DiagramError(f"unknown edge {e} in route")
        ks = [k for k, (name, s) in enumerate(d.cell[cur].sides)
              if name == e and (sign is None or s == sign)]
        if len(ks) != 1:
            raise DiagramError(f"cannot leave cell {cur} through {e} unambiguously")
        s = d.cell[cur].sides[ks[0]][1]
        steps.append(Cross(e, s, Fraction(t)))
        nxt = d.partner(cur, ks[0])
        if nxt is None:
            raise DiagramError(f"route leaves the surface through {e}")
        cur = nxt[0]
    return steps, cur


def walk(d: SuturedDiagram, start_cell: str, crossings: Sequence) -> list[Cross]:
    """Crossings of a closed curve starting and ending in ``start_cell``."""
    steps, cur = route_steps(d, start_cell, crossings)
    if cur != start_cell:
        raise DiagramError("crossing sequence does not return to its starting cell")
    return steps


# --------------------------------------------------------------------- layouts
@dataclass(frozen=True)
class Layout:
    """A curve-free (or partly drawn) base complex plus curves drawn on top of it.

    Operations that add curves edit the base and append specs; the drawn
    diagram is recomputed, and crossing points keep their names through
    the stable keys in ``names``.  ``pieces`` records how boundary edges of
    the base were subdivided: piece -> (original edge, lo, hi).
    """
    base: SuturedDiagram
    specs: tuple = ()
    names: dict = field(default_factory=dict, compare=False, hash=False)
    pieces: dict = field(default_factory=dict, compare=False, hash=False)


def layout_of(d: SuturedDiagram) -> Layout:
    if d.layout is not None:
        return d.layout
    return Layout(SuturedDiagram(d.cells, d.edges, d.orientation))


def render(lay: Layout) -> SuturedDiagram:
    if not lay.specs:
        base = lay.base
        return replace(base, layout=Layout(base, (), {}, dict(lay.pieces)))
    res = draw_curves(lay.base, lay.specs, names=dict(lay.names))
    return replace(res.diagram, layout=Layout(lay.base, tuple(lay.specs), res.keys, dict(lay.pieces)))


def flatten(d: SuturedDiagram) -> SuturedDiagram:
    """Forget the drawing history: the drawn diagram becomes its own base."""
    return SuturedDiagram(d.cells, d.edges, d.orientation)


def layout_namer(d: SuturedDiagram) -> Namer:
    lay = layout_of(d)
    base = lay.base
    extra = {c.name for c in base.cells} | {e.name for e in base.edges} | set(base.vertices)
    extra |= set(lay.names.values())
    return Namer(d, extra=extra)


def resolve_boundary(lay: Layout, edge: str, t) -> tuple[str, Fraction]:
    """Current boundary piece and local position for a position on an original boundary edge."""
    t = Fraction(t)
    hits = [(p, lo, hi) for p, (orig, lo, hi) in lay.pieces.items() if orig == edge]
    if not hits:
        if edge not in lay.base.edge or lay.base.edge[edge].kind != "boundary":
            raise DiagramError(f"{edge} is not a boundary edge")
        return edge, t
    for p, lo, hi in hits:
        if lo < t < hi:
            if lay.base.edge[p].kind != "boundary":
                raise DiagramError(f"position {t} on {edge} is already used by a handle foot")
            return p, (t - lo) / (hi - lo)
    raise DiagramError(f"position {t} on {edge} falls on a subdivision point")


def make_feet(lay: Layout, positions: Sequence, namer: Namer) -> tuple[Layout, list[str]]:
    """Split boundary edges so each requested position gets its own short foot edge."""
    base = lay.base
    pieces = dict(lay.pieces)
    by_piece: dict = {}
    order = []
    for edge, t in positions:
        p, u = resolve_boundary(replace(lay, base=base, pieces=pieces), edge, t)
        by_piece.setdefault(p, []).append(u)
        order.append((p, u))
    feet: dict = {}
    for p, us in by_piece.items():
        us = sorted(us)
        if len(set(us)) != len(us):
            raise DiagramError(f"two feet at the same position of {p}")
        cuts = [Fraction(0)]
        bounds = [Fraction(0)] + us + [Fraction(1)]
        for i, u in enumerate(us):
            delta = min(u - bounds[i], bounds[i + 2] - u) / 3
            cuts += [u - delta, u + delta]
        cuts.append(Fraction(1))
        base, names = split_boundary_edge(base, p, len(cuts) - 1, namer)
        orig, lo, hi = pieces.get(p, (p, Fraction(0), Fraction(1)))
        for i, nm in enumerate(names):
            a, b = cuts[i], cuts[i + 1]
            pieces[nm] = (orig, lo + a * (hi - lo), lo + b * (hi - lo))
        for i, u in enumerate(us):
            feet[(p, u)] = names[2 * i + 1]
    return Layout(base, lay.specs, dict(lay.names), pieces), [feet[k] for k in order]


def lane_position(d: SuturedDiagram, foot: str, cell: str, u) -> Fraction:
    """Position along ``foot`` of the point at fraction u in the traversal direction of ``cell``."""
    for c, k, s in d.uses[foot]:
        if c == cell:
            return Fraction(u) if s > 0 else 1 - Fraction(u)
    raise DiagramError(f"{foot} is not a side of {cell}")


@dataclass(frozen=True)
class Route:
    """An embedded arc from one boundary position to another, given by the edges it crosses."""
    start: tuple  # (boundary edge, position)
    crossings: tuple = ()  # ((edge, position[, sign]), ...)
    end: tuple = ()

    def reversed(self) -> "Route":
        flipped = []
        for item in reversed(self.crossings):
            e, t = item[0], item[1]
            flipped.append((e, t, -item[2]) if len(item) > 2 else (e, t))
        return Route(self.end, tuple(flipped), self.start)


def offset_route(d: SuturedDiagram, route: Route, eps=Fraction(1, 1000)) -> Route:
    """A parallel copy slightly to the right of the direction of travel."""
    (c0, _, _), = d.uses[route.start[0]]
    cur = c0
    out = []
    for item in route.crossings:
        e, t = item[0], Fraction(item[1])
        sign = item[2] if len(item) > 2 else None
        ks = [k for k, (name, s) in enumerate(d.cell[cur].sides) if name == e and (sign is None or s == sign)]
        if len(ks) != 1:
            raise DiagramError(f"cannot leave cell {cur} through {e} unambiguously")
        s = d.cell[cur].sides[ks[0]][1]
        # leaving through a + side travels from left to right of the edge; its left is the edge direction
        out.append((e, t - eps if s > 0 else t + eps, s))
        cur = d.partner(cur, ks[0])[0]
    return Route(route.start, tuple(out), route.end)
