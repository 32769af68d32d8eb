"""Orientation-preserving isomorphisms between sutured diagrams.

Two diagrams are identified when there is a homeomorphism of the surfaces
carrying alpha curves to alpha curves and beta to beta.  The search works
on the ribbon structure of the curves: each arc of a curve between
crossing points has a left and a right side, and the sides around each
region boundary cycle come in a cyclic order.  A map of sides that
respects the cyclic orders, the side flip and the curve kinds, and that
matches regions with equal genus and boundary tags, is such a
homeomorphism.  Fixing the image of one side determines a whole connected
piece, so the search only branches once per piece.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram_core import CURVE_KINDS, SuturedDiagram


@dataclass
class _Ribbon:
    kind: dict          # side -> curve kind
    nxt: dict           # side -> next side along its region cycle
    region: dict        # side -> region id
    corner: dict        # side -> crossing point at its end (None for a crossingless loop)
    curve: dict         # side -> curve id
    region_sig: dict    # region id -> (genus, tags, number of curve cycles)


def _runs(d: SuturedDiagram) -> dict:
    """Curve edge -> run id, a run being the edges between consecutive crossing points."""
    run_of = {}
    crossing = d.crossing_points
    for kind in CURVE_KINDS:
        for cid in d.curve_ids[kind]:
            edges = d.curve_edges(cid)
            starts = [i for i, e in enumerate(edges) if d.edge_ends(e)[0] in crossing]
            if not starts:
                for e in edges:
                    run_of[e] = edges[0]
                continue
            first = starts[0]
            n = len(edges)
            current = None
            for k in range(n):
                i = (first + k) % n
                if d.edge_ends(edges[i])[0] in crossing:
                    current = edges[i]
                run_of[edges[i]] = current
    return run_of


def _ribbon(d: SuturedDiagram) -> _Ribbon:
    run_of = _runs(d)
    kind, nxt, region, corner, curve, sig = {}, {}, {}, {}, {}, {}
    for r in d.regions:
        curve_cycles = 0
        for cyc in r.boundary_word:
            if all(d.edge[e].kind == "boundary" for e, _ in cyc):
                continue
            curve_cycles += 1
            # collapse consecutive edges of one run into one side
            sides = []
            for e, s in cyc:
                side = (run_of[e], s)
                if not sides or sides[-1][0] != side:
                    sides.append([side, e, s])
                else:
                    sides[-1][1], sides[-1][2] = e, s
            if len(sides) > 1 and sides[0][0] == sides[-1][0]:
                # the cycle started inside a run; its end is the end of the first piece
                sides.pop()
            for i, (side, e_last, s_last) in enumerate(sides):
                kind[side] = d.edge[e_last].kind
                curve[side] = d.edge[e_last].curve
                region[side] = r.id
                nxt[side] = sides[(i + 1) % len(sides)][0]
                tail, head = d.edge_ends(e_last)
                end = head if s_last > 0 else tail
                corner[side] = end if end in d.crossing_points else None
        sig[r.id] = (r.genus, r.tags, curve_cycles, r.touches_boundary)
    return _Ribbon(kind, nxt, region, corner, curve, sig)


def _components(rb: _Ribbon) -> list[list]:
    seen: set = set()
    comps = []
    for s in sorted(rb.kind):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in (rb.nxt[x], (x[0], -x[1])):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _propagate(r1: _Ribbon, r2: _Ribbon, root1, root2, side_map: dict, region_map: dict) -> dict | None:
    local: dict = {}
    reg_local: dict = {}
    stack = [(root1, root2)]
    while stack:
        a, b = stack.pop()
        if a in local or a in side_map:
            target = local.get(a, side_map.get(a))
            if target != b:
                return None
            continue
        if b not in r2.kind or r1.kind[a] != r2.kind[b]:
            return None
        if (r1.corner[a] is None) != (r2.corner[b] is None):
            return None
        ra, rbb = r1.region[a], r2.region[b]
        want = reg_local.get(ra, region_map.get(ra))
        if want is None:
            if r1.region_sig[ra] != r2.region_sig[rbb]:
                return None
            if rbb in region_map.values() or rbb in reg_local.values():
                return None
            reg_local[ra] = rbb
        elif want != rbb:
            return None
        local[a] = b
        stack.append((r1.nxt[a], r2.nxt[b]))
        stack.append(((a[0], -a[1]), (b[0], -b[1])))
    if len(set(local.values()) | set(side_map.values())) != len(local) + len(side_map):
        return None
    return {"sides": local, "regions": reg_local}


def iter_isomorphisms(d1: SuturedDiagram, d2: SuturedDiagram):
    """Every isomorphism d1 -> d2, as point maps with a ``"curves"`` entry mapping curve ids."""
    if d1.orientation != d2.orientation:
        return
    if len(d1.crossing_points) != len(d2.crossing_points):
        return
    for k in CURVE_KINDS:
        if len(d1.curve_ids[k]) != len(d2.curve_ids[k]):
            return
    if len(d1.boundary_circles) != len(d2.boundary_circles) or len(d1.components) != len(d2.components):
        return
    r1, r2 = _ribbon(d1), _ribbon(d2)
    if len(r1.kind) != len(r2.kind):
        return
    comps = _components(r1)
    targets = sorted(r2.kind)

    def search(i: int, side_map: dict, region_map: dict):
        if i == len(comps):
            rest1 = sorted(r1.region_sig[r] for r in r1.region_sig if r not in region_map)
            rest2 = sorted(r2.region_sig[r] for r in r2.region_sig if r not in region_map.values())
            if rest1 == rest2:
                yield side_map
            return
        root = comps[i][0]
        for t in targets:
            if t in side_map.values():
                continue
            got = _propagate(r1, r2, root, t, side_map, region_map)
            if got is None:
                continue
            yield from search(i + 1, {**side_map, **got["sides"]}, {**region_map, **got["regions"]})

    seen = []
    for side_map in search(0, {}, {}):
        points: dict = {}
        curves: dict = {}
        ok = True
        for a, b in side_map.items():
            curves[r1.curve[a]] = r2.curve[b]
            pa, pb = r1.corner[a], r2.corner[b]
            if pa is not None and points.setdefault(pa, pb) != pb:
                ok = False
                break
        if not ok or len(set(points.values())) != len(points):
            continue
        points["curves"] = curves
        # different side maps can induce the same point map
        if points not in seen:
            seen.append(points)
            yield points


def find_isomorphism(d1: SuturedDiagram, d2: SuturedDiagram) -> dict | None:
    """Point map d1 -> d2 (crossing points) of an isomorphism, or None.

    The returned dict also maps curve ids, under the key ``"curves"``.
    """
    return next(iter_isomorphisms(d1, d2), None)


def transports(iso: dict, m1, m2) -> bool:
    """True if carrying the codomain of ``m1`` along ``iso`` gives ``m2`` (same domain labels)."""
    if set(m1.domain) != set(m2.domain):
        return False
    cod = set(m2.codomain)
    for x in m1.domain:
        image = sorted(map_generator(iso, y) for y in m1.image(x))
        if any(y not in cod for y in image) or image != sorted(m2.image(x)):
            return False
    return True


def map_generator(iso: dict, gen: tuple) -> tuple:
    return tuple(sorted(iso[p] for p in gen))
