"""F2 vectors, matrices, homology and chain-map checks."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from sfkit import models
from sfkit.contact_handles import attach_h2
from sfkit.differential import differential_matrix
from sfkit.drawing import Route
from sfkit.flinalg import (BasisMismatch, ChainComplexF2, F2Matrix, F2Vector, NotAComplex, compose, homology,
                           homology_class_equal, induced_on_homology_equal, is_boundary, tensor, transpose,
                           verify_chain_map)
from fractions import Fraction


def complex_from_images(basis, images) -> ChainComplexF2:
    return ChainComplexF2(tuple(basis), F2Matrix.from_images(basis, basis, images))


# ---------------------------------------------------------------- examples
def test_disk_complex_has_rank_one():
    assert homology(differential_matrix(models.d_disk()))[0] == 1


def test_annulus_complex_has_rank_two():
    assert homology(differential_matrix(models.d_ann()))[0] == 2


def test_single_arrow_kills_both_generators():
    cx = complex_from_images("ab", {"a": [], "b": ["a"]})
    assert homology(cx) == (0, [])


def test_nonzero_square_is_rejected():
    cx = complex_from_images("ab", {"a": ["b"], "b": ["a"]})
    with pytest.raises(NotAComplex, match="not a complex"):
        homology(cx)


def test_identity_is_a_chain_map():
    d = differential_matrix(models.d_ann()).differential
    assert verify_chain_map(F2Matrix.identity(d.domain), d, d)


def test_two_handle_map_on_disk_is_a_chain_map():
    disk = models.d_disk()
    lam = Route(("e0", Fraction(1, 2)), (), ("e2", Fraction(1, 2)))
    after, m, _ = attach_h2(disk, lam, lam)
    src = differential_matrix(disk).differential
    tgt = differential_matrix(after).differential.reindex(m.codomain, m.codomain)
    assert verify_chain_map(m, src, tgt)


def test_corrupted_entry_breaks_the_chain_map():
    cx = complex_from_images("abc", {"a": [], "b": ["a"], "c": []})
    ident = F2Matrix.identity("abc")
    corrupted = ident + F2Matrix.from_images("abc", "abc", {"a": ["b"]})
    assert verify_chain_map(ident, cx.differential, cx.differential)
    assert not verify_chain_map(corrupted, cx.differential, cx.differential)


def test_shape_mismatch_is_an_error():
    d2 = complex_from_images("ab", {}).differential
    d3 = complex_from_images("abc", {}).differential
    with pytest.raises(BasisMismatch):
        verify_chain_map(F2Matrix.identity("ab"), d2, d3)


def test_basis_mismatch_on_addition_and_composition():
    with pytest.raises(BasisMismatch):
        F2Matrix.identity("ab") + F2Matrix.identity("ba")
    with pytest.raises(BasisMismatch):
        compose(F2Matrix.identity("ab"), F2Matrix.identity("abc"))
    with pytest.raises(BasisMismatch):
        F2Vector.from_labels("ab", "a") + F2Vector.from_labels("ba", "a")


def test_boundaries_and_classes():
    cx = complex_from_images("abc", {"a": [], "b": ["a"], "c": []})
    assert is_boundary(cx, F2Vector.from_labels("abc", ["a"]))
    assert not is_boundary(cx, F2Vector.from_labels("abc", ["c"]))
    assert homology_class_equal(cx, F2Vector.from_labels("abc", ["c"]), F2Vector.from_labels("abc", ["a", "c"]))


def test_maps_differing_by_a_boundary_agree_on_homology():
    cx = complex_from_images("abc", {"a": [], "b": ["a"], "c": []})
    f = F2Matrix.identity("abc")
    g = f + F2Matrix.from_images("abc", "abc", {"c": ["a"]})
    assert induced_on_homology_equal(f, g, cx, cx)
    h = f + F2Matrix.from_images("abc", "abc", {"c": ["c"]})
    assert not induced_on_homology_equal(f, h, cx, cx)


# -------------------------------------------------------------- properties
@st.composite
def matrices(draw, rows=None, cols=None):
    n = draw(st.integers(0, 6)) if cols is None else cols
    m = draw(st.integers(0, 6)) if rows is None else rows
    entries = draw(st.frozensets(st.tuples(st.integers(0, max(m - 1, 0)), st.integers(0, max(n - 1, 0))),
                                 max_size=m * n)) if m and n else frozenset()
    return F2Matrix(tuple(f"d{i}" for i in range(n)), tuple(f"c{i}" for i in range(m)), entries)


@st.composite
def complexes(draw):
    """d = P^-1 S P with S a standard complex (pairs a -> b plus loose generators)."""
    pairs = draw(st.integers(0, 3))
    loose = draw(st.integers(0, 3))
    n = 2 * pairs + loose
    basis = tuple(f"g{i}" for i in range(n))
    std = F2Matrix(basis, basis, frozenset((2 * i + 1, 2 * i) for i in range(pairs)))
    # random invertible change of basis: a product of elementary row additions
    p = F2Matrix.identity(basis)
    for _ in range(draw(st.integers(0, 12))):
        if n < 2:
            break
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i != j:
            e = F2Matrix.identity(basis) + F2Matrix(basis, basis, frozenset({(i, j)}))
            p = compose(e, p)
    p_inv = _inverse(p)
    return ChainComplexF2(basis, compose(p_inv, compose(std, p))), loose


def _inverse(p: F2Matrix) -> F2Matrix:
    n = len(p.domain)
    rows = [[int((r, c) in p.entries) for c in range(n)] + [int(r == c) for c in range(n)] for r in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r][col]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[col])]
    entries = frozenset((r, c) for r in range(n) for c in range(n) if rows[r][n + c])
    return F2Matrix(p.codomain, p.domain, entries)


@settings(max_examples=80, deadline=None)
@given(complexes())
def test_homology_rank_of_conjugated_standard_complex(data):
    cx, loose = data
    rank, reps = homology(cx)
    assert rank == loose == len(reps)
    for z in reps:
        assert cx.differential.apply(z).is_zero()


@settings(max_examples=80, deadline=None)
@given(complexes(), st.randoms(use_true_random=False))
def test_homology_rank_is_invariant_under_basis_permutation(data, rnd):
    cx, _ = data
    order = list(cx.basis)
    rnd.shuffle(order)
    permuted = ChainComplexF2(tuple(order), cx.differential.reindex(order, order))
    assert homology(permuted)[0] == homology(cx)[0]


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_plus_nullity(m):
    from sfkit.flinalg import kernel_bits
    assert m.rank() + len(kernel_bits(m)) == len(m.domain)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_transpose_is_an_involution(m):
    assert transpose(transpose(m)) == m
    assert transpose(m).rank() == m.rank()


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_composition_is_associative(data):
    a, b, c, d = (data.draw(st.integers(0, 4)) for _ in range(4))
    f = data.draw(matrices(rows=b, cols=a))
    g = data.draw(matrices(rows=c, cols=b)).relabel(f.codomain, None)
    h = data.draw(matrices(rows=d, cols=c)).relabel(g.codomain, None)
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)


@settings(max_examples=60, deadline=None)
@given(matrices(), matrices())
def test_tensor_respects_composition_with_identities(f, g):
    one_f, one_g = F2Matrix.identity(f.codomain), F2Matrix.identity(g.codomain)
    assert compose(tensor(one_f, one_g), tensor(f, g)) == tensor(f, g)
    assert tensor(f, g).rank() == f.rank() * g.rank()
