"""Trace and cotrace pairings, the trace-cobordism functional, and duality checks.

The dual of CF(S, alpha, beta) is modelled by the swapped diagram
(S, beta, alpha).  Both have the same intersection points, so a generator
names a basis element of either complex and the trace pairing is the
Kronecker delta on generator names.  The swapped complex is computed
independently by counting bigons in the swapped diagram, which is what
makes the chain-map check below a real test.

The one-dimensional space F2 is written on the single basis label ``UNIT``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .contact_handles import attach_f1, attach_h1, attach_h2, map_f3
from .diagram_core import SuturedDiagram, enumerate_generators
from .differential import differential_matrix
from .drawing import Route, layout_of
from .flinalg import BasisMismatch, F2Matrix, F2Vector, compose, tensor, transpose
from .polygons import canonical_theta, transition_map, triangle_matrix

UNIT = "1"
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PairingContext:
    """A diagram together with its swap, on one shared list of generators."""

    diagram: SuturedDiagram
    swap: SuturedDiagram = field(init=False)
    generators: tuple = field(init=False)

    def __post_init__(self):
        swap = self.diagram.swapped()
        gens = tuple(enumerate_generators(self.diagram))
        if set(gens) != set(enumerate_generators(swap)):
            raise BasisMismatch("the diagram and its swap have different generators")
        object.__setattr__(self, "swap", swap)
        object.__setattr__(self, "generators", gens)

    @property
    def pair_basis(self) -> tuple:
        return tuple((x, y) for x in self.generators for y in self.generators)


def _unit_space() -> tuple:
    return (UNIT,)


def trace_pair(ctx: PairingContext, x: tuple, y: tuple) -> int:
    if x not in ctx.generators or y not in ctx.generators:
        raise BasisMismatch(f"not a generator: {x if x not in ctx.generators else y}")
    return int(x == y)


def trace_form(ctx: PairingContext, u: F2Vector, v: F2Vector) -> int:
    """Bilinear extension of trace_pair."""
    if u.basis != ctx.generators or v.basis != ctx.generators:
        raise BasisMismatch("vectors must be written on the context generators")
    return len(u.support & v.support) % 2


def gram_matrix(ctx: PairingContext) -> F2Matrix:
    """Matrix of trace_pair, read as a map CF(alpha, beta) -> CF(beta, alpha)^*."""
    gens = ctx.generators
    images = {x: [y for y in gens if trace_pair(ctx, x, y)] for x in gens}
    return F2Matrix.from_images(gens, gens, images)


def trace_matrix(ctx: PairingContext) -> F2Matrix:
    """tr: CF(alpha, beta) (x) CF(beta, alpha) -> F2."""
    images = {(x, y): [UNIT] * trace_pair(ctx, x, y) for x, y in ctx.pair_basis}
    return F2Matrix.from_images(ctx.pair_basis, _unit_space(), images)


def cotrace_element(ctx: PairingContext) -> F2Vector:
    """cotr(1) = sum of x (x) x over all generators."""
    return F2Vector.from_labels(ctx.pair_basis, [(x, x) for x in ctx.generators])


def cotrace_matrix(ctx: PairingContext) -> F2Matrix:
    """cotr: F2 -> CF(beta, alpha) (x) CF(alpha, beta)."""
    return F2Matrix.from_images(_unit_space(), ctx.pair_basis, {UNIT: cotrace_element(ctx).labels()})


def complexes(ctx: PairingContext) -> tuple[F2Matrix, F2Matrix]:
    """Differentials of CF(alpha, beta) and CF(beta, alpha) on the shared generator order."""
    d = differential_matrix(ctx.diagram).differential.reindex(ctx.generators, ctx.generators)
    d_swap = differential_matrix(ctx.swap).differential.reindex(ctx.generators, ctx.generators)
    return d, d_swap


def trace_is_chain_map(ctx: PairingContext) -> bool:
    """tr after (d (x) 1 + 1 (x) d_swap) vanishes."""
    d, d_swap = complexes(ctx)
    one = F2Matrix.identity(ctx.generators)
    total = tensor(d, one) + tensor(one, d_swap)
    return compose(trace_matrix(ctx), total).is_zero()


def cotrace_is_cycle(ctx: PairingContext) -> bool:
    d, d_swap = complexes(ctx)
    one = F2Matrix.identity(ctx.generators)
    total = tensor(d_swap, one) + tensor(one, d)
    return total.apply(cotrace_element(ctx)).is_zero()


def trace_descends(ctx: PairingContext) -> bool:
    """tr(d a, b) = tr(a, d_swap b) for all basis elements a, b."""
    d, d_swap = complexes(ctx)
    for a in ctx.generators:
        da = set(d.image(a))
        for b in ctx.generators:
            if (b in da) != (a in set(d_swap.image(b))):
                return False
    return True


def _regroup(m: F2Matrix, dom_map, cod_map) -> F2Matrix:
    """Rewrite the basis labels of ``m`` (used to reassociate tensor products)."""
    return m.relabel([dom_map(b) for b in m.domain], [cod_map(b) for b in m.codomain])


def zigzag_identities(ctx: PairingContext) -> tuple[bool, bool]:
    """(tr (x) 1)(1 (x) cotr) = 1 on CF(alpha, beta), and (1 (x) tr)(cotr (x) 1) = 1 on CF(beta, alpha)."""
    gens = ctx.generators
    one = F2Matrix.identity(gens)
    tr, cotr = trace_matrix(ctx), cotrace_matrix(ctx)

    # V -> V (x) (V* (x) V) -> (V (x) V*) (x) V -> V
    right = _regroup(tensor(one, cotr), lambda b: b[0], lambda b: ((b[0], b[1][0]), b[1][1]))
    left = _regroup(tensor(tr, one), lambda b: b, lambda b: b[1])
    first = compose(left, right) == one

    # V* -> (V* (x) V) (x) V* -> V* (x) (V (x) V*) -> V*
    right2 = _regroup(tensor(cotr, one), lambda b: b[1], lambda b: (b[0][0], (b[0][1], b[1])))
    left2 = _regroup(tensor(one, tr), lambda b: b, lambda b: b[0])
    second = compose(left2, right2) == one
    return first, second


# ------------------------------------------------------ trace cobordism
def trace_cobordism_map(translate: SuturedDiagram) -> F2Matrix:
    """The functional x -> 1 if x is the bottom generator of a translate pair, else 0."""
    gens = enumerate_generators(translate)
    bottom = canonical_theta(translate, "bottom").generator
    images = {x: [UNIT] * int(x == bottom) for x in gens}
    return F2Matrix.from_images(gens, _unit_space(), images)


def trace_pipeline(t: SuturedDiagram) -> F2Matrix:
    """Pairing CF(alpha, beta) (x) CF(beta, alpha) -> F2 built from a triple (alpha, beta, alpha').

    The second factor is moved to CF(beta, alpha') by the transition map,
    the triangle map lands in CF(alpha, alpha'), and the trace-cobordism
    functional evaluates the result.
    """
    moved = t.relabel_kinds({"alpha": "beta", "beta": "alpha"})
    phi = transition_map(moved)
    f = triangle_matrix(t)
    ev = trace_cobordism_map(t.pair("alpha", "gamma"))
    xs = tuple(enumerate_generators(t, "alpha", "beta"))
    ys = tuple(phi.domain)
    domain = tuple((x, y) for x in xs for y in ys)
    images = {}
    for x, y in domain:
        hits: set = set()
        for y2 in phi.image(y):
            for z in f.image((x, y2)):
                hits ^= {z}
        value = sum(1 for z in hits if ev.image(z)) % 2
        images[(x, y)] = [UNIT] * value
    return F2Matrix.from_images(domain, _unit_space(), images)


# ------------------------------------------------------ duality
def check_turnaround_duality(forward: F2Matrix, turned: F2Matrix) -> bool:
    """True iff ``turned`` is the transpose of ``forward`` with generators identified by name."""
    if set(turned.domain) != set(forward.codomain) or set(turned.codomain) != set(forward.domain):
        raise BasisMismatch("the turned-around map does not act between the dual generator sets")
    return transpose(forward).reindex(turned.domain, turned.codomain) == turned


def _new_curve(after: SuturedDiagram, before: SuturedDiagram, kind: str) -> str:
    new = [c for c in after.curve_ids[kind] if c not in before.curve_ids[kind]]
    if len(new) != 1:
        raise BasisMismatch(f"expected one new {kind} curve, found {len(new)}")
    return new[0]


def f1_duality_maps(d: SuturedDiagram, p1: tuple, p2: tuple) -> tuple[F2Matrix, F2Matrix]:
    """4-dimensional 1-handle map and the 3-handle map removing the same pair from the swapped diagram."""
    after, forward, _ = attach_f1(d, p1, p2)
    swapped = after.swapped()
    _, turned = map_f3(swapped, _new_curve(swapped, d.swapped(), "alpha"),
                       _new_curve(swapped, d.swapped(), "beta"))
    return forward, turned


def band_boundary_edges(before: SuturedDiagram, after: SuturedDiagram) -> tuple[str, str]:
    """The two free boundary sides of the band added by a contact 1-handle."""
    old = {c.name for c in layout_of(before).base.cells}
    base = layout_of(after).base
    band = [c for c in base.cells if c.name not in old]
    if len(band) != 1:
        raise BasisMismatch("could not locate the 1-handle band")
    sides = [e for e, _ in band[0].sides if base.edge[e].kind == "boundary"]
    return sides[0], sides[1]


def h1_duality_maps(d: SuturedDiagram, p1: tuple, p2: tuple) -> tuple[F2Matrix, F2Matrix]:
    """Contact 1-handle map, and the map of the same cobordism turned around.

    Turned around, the handle is glued back along its co-core as a contact
    2-handle seen from the other side of the surface (mirrored lanes), and
    the 4-dimensional 3-handle then removes the new alpha/beta pair.
    """
    after, forward = attach_h1(d, p1, p2)
    t1, t2 = band_boundary_edges(d, after)
    cocore = Route((t1, HALF), (), (t2, HALF))
    swapped = after.swapped()
    handled, m2, _ = attach_h2(swapped, cocore, cocore, mirrored=True)
    _, m3 = map_f3(handled, _new_curve(handled, swapped, "alpha"), _new_curve(handled, swapped, "beta"))
    return forward, compose(m3, m2)
