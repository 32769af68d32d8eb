"""Sutured Heegaard diagrams as glued polygon complexes.

A diagram is a finite set of polygonal cells.  Each cell lists its corner
vertices counterclockwise and, for each side, the edge it runs along with a
sign (+1 if the side follows the edge direction).  Interior edges are used
by exactly two sides with opposite signs; boundary edges by one side.

Edges carry a kind: a curve family (``alpha``, ``beta``, ``gamma``), the
placeholder ``ghost`` (an interior edge that is not part of any curve), or
``boundary``.  Regions of the complement of the curves are unions of cells
joined across ghost edges.  For a curve edge, the cell holding its ``+`` use
is on the left of the curve.

Everything else in the package (gradings, differentials, handle maps) is
computed from this one structure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import intlin

CURVE_KINDS = ("alpha", "beta", "gamma")
KINDS = CURVE_KINDS + ("ghost", "boundary")


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    kind: str
    curve: str | None = None
    tag: str | None = None  # 'w' or 'z' on boundary edges of link diagrams

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagramError(f"edge {self.name}: unknown kind {self.kind!r}")
        if (self.kind in CURVE_KINDS) != (self.curve is not None):
            raise DiagramError(f"edge {self.name}: curve id required exactly for curve edges")
        if self.tag is not None and (self.kind != "boundary" or self.tag not in ("w", "z")):
            raise DiagramError(f"edge {self.name}: tags are 'w'/'z' on boundary edges only")


@dataclass(frozen=True)
class Cell:
    name: str
    verts: tuple
    sides: tuple  # ((edge name, sign), ...); side k runs verts[k] -> verts[k+1]
    genus: int = 0

    def __post_init__(self):
        if len(self.verts) != len(self.sides) or not self.sides:
            raise DiagramError(f"cell {self.name}: needs one vertex per side")

    def side_ends(self, k: int) -> tuple[str, str]:
        return self.verts[k], self.verts[(k + 1) % len(self.verts)]

    def reversed(self) -> "Cell":
        n = len(self.sides)
        verts = (self.verts[0],) + tuple(self.verts[n - i] for i in range(1, n))
        sides = tuple((self.sides[n - 1 - i][0], -self.sides[n - 1 - i][1]) for i in range(n))
        return Cell(self.name, verts, sides, self.genus)


@dataclass(frozen=True)
class Region:
    id: str
    cells: tuple
    boundary_word: tuple  # tuple of cycles; each cycle a tuple of (edge, sign)
    chi: int
    genus: int
    touches_boundary: bool
    corners: tuple  # (point, corner key) pairs at curve crossings
    tags: tuple  # tags of the boundary circles inside ('w', 'z' or '')


@dataclass(frozen=True)
class Domain:
    mult: tuple  # sorted (region id, multiplicity) with nonzero multiplicity
    from_gen: tuple | None = None
    to_gen: tuple | None = None

    @classmethod
    def make(cls, mult: dict, from_gen=None, to_gen=None) -> "Domain":
        return cls(tuple(sorted((r, m) for r, m in mult.items() if m)), from_gen, to_gen)

    def as_dict(self) -> dict:
        return dict(self.mult)

    def __getitem__(self, region: str) -> int:
        return self.as_dict().get(region, 0)

    def __add__(self, other: "Domain") -> "Domain":
        out = self.as_dict()
        for r, m in other.mult:
            out[r] = out.get(r, 0) + m
        ends = (self.from_gen, other.to_gen) if self.to_gen == other.from_gen else (None, None)
        return Domain.make(out, *ends)

    def __neg__(self) -> "Domain":
        return Domain(tuple((r, -m) for r, m in self.mult), self.to_gen, self.from_gen)

    def is_positive(self) -> bool:
        return all(m >= 0 for _, m in self.mult)


@dataclass(frozen=True)
class SuturedDiagram:
    cells: tuple
    edges: tuple
    orientation: str = "standard"
    # drawing history (base complex plus curve specs); ignored by equality
    layout: object = field(default=None, compare=False, hash=False, repr=False)

    # ----------------------------------------------------------- lookup
    @cached_property
    def cell(self) -> dict:
        return {c.name: c for c in self.cells}

    @cached_property
    def edge(self) -> dict:
        return {e.name: e for e in self.edges}

    @cached_property
    def uses(self) -> dict:
        """edge name -> list of (cell, side index, sign)."""
        out: dict = {e.name: [] for e in self.edges}
        for c in self.cells:
            for k, (e, s) in enumerate(c.sides):
                out.setdefault(e, []).append((c.name, k, s))
        return out

    def partner(self, cell: str, k: int) -> tuple[str, int] | None:
        e, s = self.cell[cell].sides[k]
        for c2, k2, s2 in self.uses[e]:
            if (c2, k2) != (cell, k):
                return c2, k2
        return None

    def kind_of_side(self, cell: str, k: int) -> str:
        return self.edge[self.cell[cell].sides[k][0]].kind

    def edge_ends(self, e: str) -> tuple[str, str]:
        c, k, s = self.uses[e][0]
        a, b = self.cell[c].side_ends(k)
        return (a, b) if s > 0 else (b, a)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted({v for c in self.cells for v in c.verts}))

    @cached_property
    def curve_ids(self) -> dict:
        """kind -> sorted curve ids."""
        out: dict = {k: set() for k in CURVE_KINDS}
        for e in self.edges:
            if e.kind in CURVE_KINDS:
                out[e.kind].add(e.curve)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @property
    def curves_alpha(self) -> tuple:
        return self.curve_ids["alpha"]

    @property
    def curves_beta(self) -> tuple:
        return self.curve_ids["beta"]

    @property
    def curves_gamma(self) -> tuple:
        return self.curve_ids["gamma"]

    def curve_kind(self, curve: str) -> str:
        for k, ids in self.curve_ids.items():
            if curve in ids:
                return k
        raise KeyError(curve)

    # ------------------------------------------------------ rotations
    @cached_property
    def rotations(self) -> dict:
        """vertex -> list of link components; each a list of corners (cell, k).

        Consecutive corners are separated by the side k-1 of the earlier corner,
        glued to the outgoing side of the next one (counterclockwise order).
        Chains at boundary vertices start right after a boundary side.
        """
        succ: dict = {}
        pred: dict = {}
        for c in self.cells:
            n = len(c.sides)
            for k in range(n):
                p = self.partner(c.name, (k - 1) % n)
                if p is not None:
                    succ[(c.name, k)] = p
                    pred[p] = (c.name, k)
        seen: set = set()
        out: dict = {}
        for c in self.cells:
            for k in range(len(c.sides)):
                start = (c.name, k)
                if start in seen:
                    continue
                first = start
                while first in pred:
                    first = pred[first]
                    if first == start:
                        break
                comp = [first]
                nxt = succ.get(first)
                while nxt is not None and nxt != first:
                    comp.append(nxt)
                    nxt = succ.get(nxt)
                seen.update(comp)
                v = self.cell[first[0]].verts[first[1]]
                out.setdefault(v, []).append((comp, nxt == first))
        return out

    def ends_around(self, v: str) -> list[str]:
        """Edge names crossed going counterclockwise around an interior vertex."""
        (comp, cyclic), = self.rotations[v]
        out = []
        for c, k in comp:
            cell = self.cell[c]
            out.append(cell.sides[(k - 1) % len(cell.sides)][0])
        return out

    @cached_property
    def curve_ends(self) -> dict:
        """vertex -> counterclockwise list of (curve id, +1 outgoing / -1 incoming)."""
        out: dict = {}
        for v, comps in self.rotations.items():
            seq = []
            for comp, _ in comps:
                for c, k in comp:
                    cell = self.cell[c]
                    e, s = cell.sides[k]
                    ed = self.edge[e]
                    if ed.kind in CURVE_KINDS:
                        seq.append((ed.curve, 1 if s > 0 else -1, e))
                    # incoming side k-1 at the same corner is seen again at the next corner
            out[v] = seq
        return out

    # -------------------------------------------------------- points
    @cached_property
    def crossing_points(self) -> dict:
        """vertex -> (kind_a, curve_a, kind_b, curve_b) for transverse crossings of two families."""
        out = {}
        for v, ends in self.curve_ends.items():
            curves = sorted({c for c, _, _ in ends}, key=lambda c: CURVE_KINDS.index(self.curve_kind(c)))
            if len(curves) == 2:
                a, b = curves
                ka, kb = self.curve_kind(a), self.curve_kind(b)
                if ka != kb:
                    out[v] = (ka, a, kb, b)
        return out

    def points(self, kind_a: str = "alpha", kind_b: str = "beta") -> tuple:
        return tuple(sorted(v for v, (ka, _, kb, _) in self.crossing_points.items()
                            if {ka, kb} == {kind_a, kind_b}))

    def point_curves(self, v: str) -> dict:
        ka, a, kb, b = self.crossing_points[v]
        return {ka: a, kb: b}

    # ------------------------------------------------------- regions
    @cached_property
    def _region_of_cell(self) -> dict:
        parent = {c.name: c.name for c in self.cells}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.kind == "ghost":
                us = self.uses[e.name]
                if len(us) == 2:
                    a, b = find(us[0][0]), find(us[1][0])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for c in self.cells:
            groups.setdefault(find(c.name), []).append(c.name)
        ordered = sorted(groups.values(), key=lambda cs: min(cs))
        return {c: f"R{i}" for i, cs in enumerate(ordered) for c in cs}

    def region_of(self, cell: str) -> str:
        return self._region_of_cell[cell]

    def region_left_right(self, e: str) -> tuple[str, str]:
        """Regions on the left (+ use) and right (- use) of an interior edge."""
        left = right = None
        for c, _, s in self.uses[e]:
            if s > 0:
                left = self.region_of(c)
            else:
                right = self.region_of(c)
        return left, right

    def _next_boundary_side(self, cell: str, k: int) -> tuple[str, int]:
        c, j = cell, k
        while True:
            n = len(self.cell[c].sides)
            j = (j + 1) % n
            if self.kind_of_side(c, j) != "ghost":
                return c, j
            c, j = self.partner(c, j)

    @cached_property
    def regions(self) -> tuple:
        members: dict = {}
        for c in self.cells:
            members.setdefault(self.region_of(c.name), []).append(c.name)
        corner_map = self.quadrant_regions
        out = []
        for rid in sorted(members, key=lambda r: int(r[1:])):
            cells = members[rid]
            sides = [(c, k) for c in cells for k in range(len(self.cell[c].sides))
                     if self.kind_of_side(c, k) != "ghost"]
            cycles = []
            seen: set = set()
            for start in sides:
                if start in seen:
                    continue
                cyc = []
                cur = start
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(self.cell[cur[0]].sides[cur[1]])
                    cur = self._next_boundary_side(*cur)
                cycles.append(tuple(cyc))
            # Euler characteristic of the region from its cells
            faces = sum(1 - 2 * self.cell[c].genus for c in cells)
            ghost_edges = {self.cell[c].sides[k][0] for c in cells for k in range(len(self.cell[c].sides))
                           if self.kind_of_side(c, k) == "ghost"}
            nonghost = len(sides)
            verts = self._region_vertex_classes(cells)
            chi = verts - len(ghost_edges) - nonghost + faces
            b = len(cycles)
            genus2 = 2 - chi - b
            touches = any(self.edge[e].kind == "boundary" for cyc in cycles for e, _ in cyc)
            tags = []
            for cyc in cycles:
                kinds = {self.edge[e].kind for e, _ in cyc}
                if kinds == {"boundary"}:
                    tags.append(self.edge[cyc[0][0]].tag or "")
            corners = tuple(sorted((p, key) for (p, key), r in corner_map.items() if r == rid))
            out.append(Region(rid, tuple(sorted(cells)), tuple(cycles), chi,
                              genus2 // 2 if genus2 >= 0 else -1, touches, corners, tuple(sorted(tags))))
        return tuple(out)

    def _region_vertex_classes(self, cells: Sequence[str]) -> int:
        cellset = set(cells)
        seen: set = set()
        count = 0
        for c in cells:
            n = len(self.cell[c].sides)
            for k in range(n):
                if (c, k) in seen:
                    continue
                count += 1
                stack = [(c, k)]
                while stack:
                    cur = stack.pop()
                    if cur in seen:
                        continue
                    seen.add(cur)
                    cc, kk = cur
                    m = len(self.cell[cc].sides)
                    # across the incoming side
                    if self.kind_of_side(cc, (kk - 1) % m) == "ghost":
                        p = self.partner(cc, (kk - 1) % m)
                        if p and p[0] in cellset:
                            stack.append(p)
                    # across the outgoing side (inverse rotation)
                    if self.kind_of_side(cc, kk) == "ghost":
                        p = self.partner(cc, kk)
                        if p and p[0] in cellset:
                            m2 = len(self.cell[p[0]].sides)
                            stack.append((p[0], (p[1] + 1) % m2))
        return count

    @cached_property
    def region(self) -> dict:
        return {r.id: r for r in self.regions}

    @cached_property
    def quadrant_regions(self) -> dict:
        """(point, quadrant index) -> region, quadrants counted counterclockwise.

        Quadrant 0 is the one swept counterclockwise from the outgoing end of the
        lower-kind curve (alpha before beta before gamma).
        """
        out = {}
        for v, (ka, a, kb, b) in self.crossing_points.items():
            (comp, _), = self.rotations[v]
            # rotate so that the first corner's outgoing side is curve a, outgoing
            idx = None
            for i, (c, k) in enumerate(comp):
                e, s = self.cell[c].sides[k]
                if self.edge[e].curve == a and s > 0:
                    idx = i
                    break
            comp = comp[idx:] + comp[:idx]
            q = -1
            for c, k in comp:
                e, s = self.cell[c].sides[k]
                if self.edge[e].kind in CURVE_KINDS:
                    q += 1
                out[(v, q)] = self.region_of(c)
        return out

    def quadrants(self, v: str) -> list[str]:
        return [self.quadrant_regions[(v, q)] for q in range(4)]

    # ---------------------------------------------------- boundary circles
    def next_boundary_use(self, cell: str, k: int) -> tuple[str, int]:
        """The boundary side following side k of cell along its boundary circle."""
        c, j = cell, k
        while True:
            j = (j + 1) % len(self.cell[c].sides)
            if self.kind_of_side(c, j) == "boundary":
                return c, j
            c, j = self.partner(c, j)

    @cached_property
    def boundary_circles(self) -> tuple:
        """Boundary circles as ((edge names in boundary order), tag)."""
        seen: set = set()
        out = []
        for e in sorted(x.name for x in self.edges if x.kind == "boundary"):
            if e in seen or not self.uses.get(e):
                continue
            c, k, _ = self.uses[e][0]
            cur = (c, k)
            cyc = []
            while True:
                name = self.cell[cur[0]].sides[cur[1]][0]
                if name in seen:
                    break
                seen.add(name)
                cyc.append(name)
                cur = self.next_boundary_use(*cur)
            tags = {self.edge[x].tag for x in cyc}
            out.append((tuple(cyc), tags.pop() if len(tags) == 1 else None))
        return tuple(out)

    def boundary_walk(self, e: str) -> list[tuple[str, int, str]]:
        """Sides (cell, index, vertex at its start) around the boundary circle through e."""
        c, k, _ = self.uses[e][0]
        cur = (c, k)
        out = []
        while True:
            out.append((cur[0], cur[1], self.cell[cur[0]].verts[cur[1]]))
            cur = self.next_boundary_use(*cur)
            if cur == (c, k):
                return out

    def circle_of_edge(self, e: str) -> int:
        for i, (cyc, _) in enumerate(self.boundary_circles):
            if e in cyc:
                return i
        raise KeyError(e)

    def region_of_circle(self, i: int) -> str:
        e = self.boundary_circles[i][0][0]
        return self.region_of(self.uses[e][0][0])

    # ------------------------------------------------------ components
    @cached_property
    def components(self) -> list[set]:
        adj: dict = {c.name: set() for c in self.cells}
        for e, us in self.uses.items():
            if len(us) == 2:
                adj[us[0][0]].add(us[1][0])
                adj[us[1][0]].add(us[0][0])
        comps = []
        seen: set = set()
        for c in sorted(adj):
            if c in seen:
                continue
            stack, comp = [c], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            comps.append(comp)
        return comps

    def euler_characteristic(self) -> int:
        faces = sum(1 - 2 * c.genus for c in self.cells)
        return len(self.vertices) - len(self.edges) + faces

    # ------------------------------------------------------- curves
    def curve_edges(self, curve: str) -> list[str]:
        """Edges of a closed curve in order of travel."""
        edges = [e.name for e in self.edges if e.curve == curve]
        if not edges:
            raise KeyError(curve)
        out_at = {}
        for e in edges:
            out_at.setdefault(self.edge_ends(e)[0], []).append(e)
        start = min(edges)
        seq = [start]
        cur = start
        while True:
            head = self.edge_ends(cur)[1]
            nxt = out_at.get(head, [])
            if len(nxt) != 1:
                raise DiagramError(f"curve {curve} is not a simple closed curve at {head}")
            cur = nxt[0]
            if cur == start:
                break
            seq.append(cur)
            if len(seq) > len(edges):
                raise DiagramError(f"curve {curve} does not close up")
        if len(seq) != len(edges):
            raise DiagramError(f"curve {curve} has more than one component")
        return seq

    def curve_points(self, curve: str) -> list[str]:
        """Crossing points met along a curve, in order of travel from its first edge."""
        out = []
        for e in self.curve_edges(curve):
            tail = self.edge_ends(e)[0]
            if tail in self.crossing_points:
                out.append(tail)
        return out

    # -------------------------------------------------------- derived diagrams
    def reversed(self) -> "SuturedDiagram":
        flag = "reversed" if self.orientation == "standard" else "standard"
        return SuturedDiagram(tuple(c.reversed() for c in self.cells), self.edges, flag)

    def relabel_kinds(self, mapping: dict) -> "SuturedDiagram":
        edges = []
        for e in self.edges:
            k = mapping.get(e.kind, e.kind)
            if k == "ghost":
                edges.append(Edge(e.name, "ghost"))
            else:
                edges.append(replace(e, kind=k))
        return SuturedDiagram(self.cells, tuple(edges), self.orientation)

    def swapped(self) -> "SuturedDiagram":
        return self.relabel_kinds({"alpha": "beta", "beta": "alpha"})

    def pair(self, first: str, second: str) -> "SuturedDiagram":
        """Sub-diagram (first, second) written as (alpha, beta); the third family becomes ghost."""
        mapping = {k: "ghost" for k in CURVE_KINDS}
        mapping[first] = "alpha"
        mapping[second] = "beta"
        return self.relabel_kinds(mapping)

    def with_tags(self, tags: dict) -> "SuturedDiagram":
        """Tag boundary circles (circle index -> 'w'/'z'/None)."""
        edge_tag = {}
        for i, (cyc, _) in enumerate(self.boundary_circles):
            if i in tags:
                for e in cyc:
                    edge_tag[e] = tags[i]
        edges = tuple(replace(e, tag=edge_tag[e.name]) if e.name in edge_tag else e for e in self.edges)
        return SuturedDiagram(self.cells, edges, self.orientation)


# ----------------------------------------------------------------- validation
def validate(d: SuturedDiagram, balanced: bool = True) -> list[str]:
    """Every violated invariant, as readable messages; empty when the diagram is well formed."""
    problems: list[str] = []
    for c in d.cells:
        for e, s in c.sides:
            if e not in d.edge:
                problems.append(f"cell {c.name}: unknown edge {e}")
            if s not in (1, -1):
                problems.append(f"cell {c.name}: side sign must be +1 or -1")
        if c.genus < 0:
            problems.append(f"cell {c.name}: negative genus")
    if problems:
        return problems
    if len({c.name for c in d.cells}) != len(d.cells):
        problems.append("duplicate cell names")
    if len({e.name for e in d.edges}) != len(d.edges):
        problems.append("duplicate edge names")
    for e in d.edges:
        us = d.uses[e.name]
        if e.kind == "boundary":
            if len(us) != 1:
                problems.append(f"boundary edge {e.name} must appear on exactly one region boundary")
        else:
            if len(us) != 2 or sorted(s for _, _, s in us) != [-1, 1]:
                problems.append(f"edge {e.name} must appear twice with opposite orientations")
                continue
        ends = set()
        for c, k, s in us:
            a, b = d.cell[c].side_ends(k)
            ends.add((a, b) if s > 0 else (b, a))
        if len(ends) != 1:
            problems.append(f"edge {e.name}: glued sides disagree on endpoints")
    if problems:
        return problems
    nalpha, nbeta = len(d.curves_alpha), len(d.curves_beta)
    if balanced and nalpha != nbeta:
        problems.append(f"unbalanced: {nalpha} alpha curves and {nbeta} beta curves")
    # vertex links
    for v, comps in d.rotations.items():
        if len(comps) != 1:
            problems.append(f"vertex {v}: link is not connected (not a surface point)")
            continue
        comp, cyclic = comps[0]
        on_boundary = any(d.edge[d.cell[c].sides[k][0]].kind == "boundary" for c, k in comp)
        if not cyclic and not on_boundary:
            problems.append(f"vertex {v}: open link at an interior vertex")
        ends = d.curve_ends.get(v, [])
        if on_boundary and ends:
            problems.append(f"vertex {v}: a curve touches the boundary")
            continue
        by_curve: dict = {}
        for cid, sgn, _ in ends:
            by_curve.setdefault(cid, []).append(sgn)
        for cid, sg in by_curve.items():
            if sorted(sg) != [-1, 1]:
                problems.append(f"vertex {v}: curve {cid} is not embedded here")
        kinds = {}
        for cid in by_curve:
            kinds.setdefault(d.curve_kind(cid), []).append(cid)
        for k, cids in kinds.items():
            if len(cids) > 1:
                problems.append(f"vertex {v}: {k} curves {', '.join(sorted(cids))} meet")
        if len(by_curve) > 2:
            problems.append(f"vertex {v}: corner count != 4 (more than two curves meet)")
        elif len(by_curve) == 2 and len(kinds) == 2:
            seq = [cid for cid, _, _ in ends]
            if len(seq) != 4 or seq[0] == seq[1] or seq[1] == seq[2] or seq[2] == seq[3]:
                problems.append(f"vertex {v}: corner count != 4 in alternating order")
    if problems:
        return problems
    for kind in CURVE_KINDS:
        for cid in d.curve_ids[kind]:
            try:
                d.curve_edges(cid)
            except DiagramError as exc:
                problems.append(str(exc))
    for comp in d.components:
        if not any(d.edge[e].kind == "boundary" for c in comp for e, _ in d.cell[c].sides):
            problems.append(f"surface component containing {min(comp)} has no boundary circle")
    if problems:
        return problems
    for cyc, _ in d.boundary_circles:
        tags = {d.edge[e].tag for e in cyc}
        if len(tags) > 1:
            problems.append(f"boundary circle through {cyc[0]} has mixed tags")
    # Euler characteristic, two ways
    chi_cells = d.euler_characteristic()
    curve_edges = sum(1 for e in d.edges if e.kind in CURVE_KINDS)
    corr = 0
    for v in d.vertices:
        ends = d.curve_ends.get(v, [])
        if ends:
            corr += len(ends) - 1
    chi_regions = sum(r.chi for r in d.regions) + curve_edges - corr
    if chi_cells != chi_regions:
        problems.append(f"Euler characteristic mismatch: cells {chi_cells}, regions {chi_regions}")
    for r in d.regions:
        if (2 - r.chi - len(r.boundary_word)) % 2 or r.genus < 0:
            problems.append(f"region {r.id}: inconsistent Euler characteristic")
    return problems


def check(d: SuturedDiagram, balanced: bool = True) -> SuturedDiagram:
    problems = validate(d, balanced)
    if problems:
        raise DiagramError("; ".join(problems))
    return d


# ----------------------------------------------------------------- generators
def enumerate_generators(d: SuturedDiagram, kind_a: str = "alpha", kind_b: str = "beta") -> list[tuple]:
    """All generators (one point on each curve of both families), sorted."""
    a_ids = d.curve_ids[kind_a]
    b_ids = d.curve_ids[kind_b]
    if len(a_ids) != len(b_ids):
        return []
    on_a: dict = {a: [] for a in a_ids}
    for p in d.points(kind_a, kind_b):
        pc = d.point_curves(p)
        on_a[pc[kind_a]].append((p, pc[kind_b]))
    out = []

    def rec(i, used, chosen):
        if i == len(a_ids):
            out.append(tuple(sorted(chosen)))
            return
        for p, b in on_a[a_ids[i]]:
            if b not in used:
                rec(i + 1, used | {b}, chosen + [p])

    rec(0, frozenset(), [])
    return sorted(out)


# -------------------------------------------------------------------- domains
def _curve_point_equations(d: SuturedDiagram, kinds: Sequence[str]):
    """Rows (coefficient dict over regions, point, curve) for c_in - c_out at crossing points."""
    rows = []
    for kind in kinds:
        for cid in d.curve_ids[kind]:
            edges = d.curve_edges(cid)
            for i, e in enumerate(edges):
                v = d.edge_ends(e)[0]
                if v not in d.crossing_points:
                    continue
                prev = edges[i - 1]
                coeff: dict = {}
                for ed, sgn in ((prev, 1), (e, -1)):
                    left, right = d.region_left_right(ed)
                    coeff[left] = coeff.get(left, 0) + sgn
                    coeff[right] = coeff.get(right, 0) - sgn
                rows.append((coeff, v, cid))
    return rows


def _allowed_regions(d: SuturedDiagram, tagged_ok: bool) -> list[str]:
    out = []
    for r in d.regions:
        if not r.touches_boundary:
            out.append(r.id)
        elif tagged_ok and r.tags and all(t for t in r.tags):
            out.append(r.id)
    return out


def _endpoint_rhs(d: SuturedDiagram, kind: str, point: str, starts: dict) -> int:
    """Value of d(d_kind D) at a point, given {kind: (set of start points, set of end points)}."""
    start, end = starts[kind]
    return (point in end) - (point in start)


def solve_domain(d: SuturedDiagram, corner_data: dict, tagged_ok: bool) -> dict | None:
    """Integer multiplicities satisfying the boundary equations.

    ``corner_data`` maps each curve kind to (points where its boundary chain
    starts, points where it ends).
    """
    kinds = [k for k in CURVE_KINDS if d.curve_ids[k]]
    allowed = _allowed_regions(d, tagged_ok)
    col = {r: i for i, r in enumerate(allowed)}
    a_rows, b = [], []
    for coeff, v, cid in _curve_point_equations(d, kinds):
        kind = d.curve_kind(cid)
        row = [0] * len(allowed)
        ok = True
        for r, cval in coeff.items():
            if cval == 0:
                continue
            if r not in col:
                continue
            row[col[r]] += cval
        a_rows.append(row)
        b.append(_endpoint_rhs(d, kind, v, corner_data) if kind in corner_data else 0)
    if not allowed:
        return {} if all(x == 0 for x in b) else None
    sol = intlin.solve_integer(a_rows, b, len(allowed))
    if sol is None:
        return None
    return {r: sol[col[r]] for r in allowed if sol[col[r]]}


def find_connecting_domain(d: SuturedDiagram, x: Sequence[str], y: Sequence[str]) -> Domain | None:
    """Some domain from x to y (tagged boundary regions allowed), or None."""
    x, y = tuple(sorted(x)), tuple(sorted(y))
    if x == y:
        return Domain.make({}, x, y)
    xs, ys = set(x), set(y)
    mult = solve_domain(d, {"alpha": (xs, ys), "beta": (ys, xs)}, tagged_ok=True)
    if mult is None:
        return None
    return Domain.make(mult, x, y)


def euler_measure(d: SuturedDiagram, region: str) -> Fraction:
    r = d.region[region]
    chi = r.chi + sum(1 for t in r.tags if t)
    return Fraction(chi) - Fraction(len(r.corners), 4)


def point_measure(d: SuturedDiagram, mult: dict, point: str) -> Fraction:
    return Fraction(sum(mult.get(r, 0) for r in d.quadrants(point)), 4)


def maslov_index(d: SuturedDiagram, dom: Domain, extra_points: Iterable[str] = ()) -> int:
    """Euler measure plus average corner multiplicities at both endpoint generators."""
    mult = dom.as_dict()
    total = sum(m * euler_measure(d, r) for r, m in mult.items())
    pts = list(dom.from_gen or ()) + list(dom.to_gen or ()) + list(extra_points)
    total += sum(point_measure(d, mult, p) for p in pts)
    if total.denominator != 1:
        raise DiagramError(f"non-integer Maslov index {total}: corrupted domain")
    return int(total)


def basepoint_count(d: SuturedDiagram, dom: Domain, tag: str) -> int:
    mult = dom.as_dict()
    total = 0
    for i, (cyc, t) in enumerate(d.boundary_circles):
        if t == tag:
            total += mult.get(d.region_of_circle(i), 0)
    return total


def has_tags(d: SuturedDiagram) -> bool:
    return any(t for _, t in d.boundary_circles)


def relative_gradings(d: SuturedDiagram, x: Sequence[str], y: Sequence[str]):
    """(gr, gr_w, gr_z, alexander) of x relative to y, or None without a connecting domain."""
    dom = find_connecting_domain(d, x, y)
    if dom is None:
        return None
    mu = maslov_index(d, dom)
    if not has_tags(d):
        return mu, None, None, None
    grw = mu - 2 * basepoint_count(d, dom, "w")
    grz = mu - 2 * basepoint_count(d, dom, "z")
    return mu, grw, grz, Fraction(grw - grz, 2)


def periodic_domain_basis(d: SuturedDiagram) -> list[Domain]:
    kinds = [k for k in CURVE_KINDS if d.curve_ids[k]]
    allowed = _allowed_regions(d, tagged_ok=False)
    if not allowed:
        return []
    col = {r: i for i, r in enumerate(allowed)}
    rows = []
    for coeff, v, cid in _curve_point_equations(d, kinds):
        row = [0] * len(allowed)
        for r, cval in coeff.items():
            if r in col:
                row[col[r]] += cval
        rows.append(row)
    if not rows:
        rows = [[0] * len(allowed)]
    basis = intlin.integer_kernel(rows, len(allowed))
    return [Domain.make({r: vec[col[r]] for r in allowed}) for vec in basis]


def is_admissible(d: SuturedDiagram) -> bool:
    """No nonzero periodic domain with all multiplicities nonnegative."""
    basis = periodic_domain_basis(d)
    if not basis:
        return True
    regions = sorted({r for p in basis for r, _ in p.mult})
    vecs = [p.as_dict() for p in basis]
    cons = []
    for r in regions:
        cons.append(([v.get(r, 0) for v in vecs], 0))
    cons.append(([sum(v.values()) for v in vecs], 1))
    return not intlin.feasible(cons, len(vecs))


def is_nice(d: SuturedDiagram, allowed_corners: Iterable[int] = (2, 4)) -> bool:
    """Every region away from the boundary is an embedded polygon with an allowed corner count."""
    allowed_corners = set(allowed_corners)
    for r in d.regions:
        if r.touches_boundary:
            continue
        if r.chi != 1 or r.genus != 0 or len(r.boundary_word) != 1:
            return False
        pts = [p for p, _ in r.corners]
        if len(pts) not in allowed_corners or len(set(pts)) != len(pts):
            return False
    return True


# ----------------------------------------------------------------- support χ
def support_euler(d: SuturedDiagram, regions: Iterable[str]) -> int:
    """Euler characteristic of the closed union of the given regions."""
    rs = set(regions)
    cells = [c for c in d.cells if d.region_of(c.name) in rs]
    verts = {v for c in cells for v in c.verts}
    edges = {e for c in cells for e, _ in c.sides}
    return len(verts) - len(edges) + sum(1 - 2 * c.genus for c in cells)


def support_connected(d: SuturedDiagram, regions: Iterable[str]) -> bool:
    rs = set(regions)
    cells = {c.name for c in d.cells if d.region_of(c.name) in rs}
    if not cells:
        return True
    adj: dict = {c: set() for c in cells}
    for c in cells:
        for e, _ in d.cell[c].sides:
            for c2, _, _ in d.uses[e]:
                if c2 in cells:
                    adj[c].add(c2)
        # point contact does not connect a domain's interior; edges suffice here
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    return seen == cells
