"""Differential on nice diagrams by counting empty embedded bigons and rectangles.

For a pair of generators differing in one or two points, the boundary of a
candidate domain is fixed up to the choice of arc on each curve involved.
Since every boundary-touching region has multiplicity zero, each choice
determines at most one domain, found by propagation across curve edges.
A candidate counts when it is a 0/1 disk with convex corners at the moved
points, Maslov index one, and no other generator point on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .diagram_core import (CURVE_KINDS, DiagramError, Domain, SuturedDiagram, enumerate_generators,
                           is_admissible, is_nice, maslov_index, support_connected, support_euler)
from .flinalg import ChainComplexF2, F2Matrix, compose


class NicenessRequired(DiagramError):
    pass


@dataclass(frozen=True)
class PolygonCount:
    from_gen: tuple
    to_gen: tuple
    domains: tuple
    count_mod2: int


def arc_chains(d: SuturedDiagram, curve: str, start: str, end: str) -> list[dict]:
    """The two 1-chains on a curve with boundary end - start (empty if start == end)."""
    edges = d.curve_edges(curve)
    tails = [d.edge_ends(e)[0] for e in edges]
    i, j = tails.index(start), tails.index(end)
    if i == j:
        return [{}]
    n = len(edges)
    fwd = {}
    k = i
    while k != j:
        fwd[edges[k]] = 1
        k = (k + 1) % n
    bwd = {}
    k = j
    while k != i:
        bwd[edges[k]] = -1
        k = (k + 1) % n
    return [fwd, bwd]


def domain_from_chain(d: SuturedDiagram, chain: dict) -> dict | None:
    """Unique multiplicities vanishing on boundary-touching regions with the given curve boundary."""
    mult: dict = {r.id: 0 for r in d.regions if r.touches_boundary}
    adj: dict = {}
    for e in d.edges:
        if e.kind in CURVE_KINDS:
            left, right = d.region_left_right(e.name)
            c = chain.get(e.name, 0)
            adj.setdefault(left, []).append((right, -c))
            adj.setdefault(right, []).append((left, c))
    stack = list(mult)
    while stack:
        r = stack.pop()
        for s, delta in adj.get(r, ()):
            val = mult[r] + delta
            if s in mult:
                if mult[s] != val:
                    return None
            else:
                mult[s] = val
                stack.append(s)
    if len(mult) != len(d.regions):
        return None
    return {r: m for r, m in mult.items() if m}


def _moved(x: Sequence[str], y: Sequence[str]):
    xs, ys = set(x), set(y)
    return sorted(xs - ys), sorted(ys - xs)


def is_empty_embedded(d: SuturedDiagram, mult: dict, corner_points: Sequence[str], others: Sequence[str],
                      dom: Domain, target_index: int) -> bool:
    if not mult or any(m not in (0, 1) for m in mult.values()):
        return False
    support = [r for r, m in mult.items() if m]
    if not support_connected(d, support) or support_euler(d, support) != 1:
        return False
    for p in corner_points:
        if sum(mult.get(r, 0) for r in d.quadrants(p)) != 1:
            return False
    for p in others:
        if any(mult.get(r, 0) for r in d.quadrants(p)):
            return False
    return maslov_index(d, dom) == target_index


def count_empty_polygons(d: SuturedDiagram, x: Sequence[str], y: Sequence[str], check_nice: bool = True) -> PolygonCount:
    x, y = tuple(sorted(x)), tuple(sorted(y))
    if check_nice and not is_nice(d):
        raise NicenessRequired("niceness required")
    gone, come = _moved(x, y)
    if len(gone) not in (1, 2):
        return PolygonCount(x, y, (), 0)
    alpha_of = {p: d.point_curves(p)["alpha"] for p in list(x) + list(y)}
    beta_of = {p: d.point_curves(p)["beta"] for p in list(x) + list(y)}
    options = []
    for p in gone:
        q = next((q for q in come if alpha_of[q] == alpha_of[p]), None)
        if q is None:
            return PolygonCount(x, y, (), 0)
        options.append(arc_chains(d, alpha_of[p], p, q))
    for q in come:
        p = next((p for p in gone if beta_of[p] == beta_of[q]), None)
        if p is None:
            return PolygonCount(x, y, (), 0)
        options.append(arc_chains(d, beta_of[q], q, p))
    others = [p for p in x if p not in gone]
    found = []
    for combo in itertools.product(*options):
        chain: dict = {}
        for part in combo:
            for e, c in part.items():
                chain[e] = chain.get(e, 0) + c
        mult = domain_from_chain(d, chain)
        if mult is None:
            continue
        dom = Domain.make(mult, x, y)
        if dom in found:
            continue
        if is_empty_embedded(d, mult, gone + come, others, dom, 1):
            found.append(dom)
    return PolygonCount(x, y, tuple(found), len(found) % 2)


def differential_matrix(d: SuturedDiagram, check_admissible: bool = True) -> ChainComplexF2:
    if not is_nice(d):
        raise NicenessRequired("niceness required")
    if check_admissible and not is_admissible(d):
        raise DiagramError("admissibility required")
    gens = enumerate_generators(d)
    images: dict = {}
    for x in gens:
        hits = []
        for y in gens:
            if x == y or len(set(x) - set(y)) > 2:
                continue
            if count_empty_polygons(d, x, y, check_nice=False).count_mod2:
                hits.append(y)
        images[x] = hits
    m = F2Matrix.from_images(gens, gens, images)
    cx = ChainComplexF2(tuple(gens), m)
    if not compose(m, m).is_zero():
        raise DiagramError("differential does not square to zero: encoding bug")
    return cx
