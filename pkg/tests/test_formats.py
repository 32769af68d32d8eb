"""Text formats for diagrams, positions, routes, scripts, open books and matrices."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

import helpers
from sfkit import data_path, models
from sfkit.contact_handles import run_script
from sfkit.diagram_core import enumerate_generators
from sfkit.drawing import Route
from sfkit.flinalg import F2Matrix
from sfkit.formats import (FormatError, format_matrix, format_position, format_route, format_script, format_step,
                           parse_diagram, parse_diagram_file, parse_matrix, parse_open_book, parse_position,
                           parse_route, parse_script, parse_step, serialize_diagram, serialize_open_book)
from sfkit.isomorphism import find_isomorphism

DIAGRAM_FILES = ["disk.sfd", "annulus.sfd", "empty.sfd", "two_holes.sfd", "unknot.sfd", "annulus_triple.sfd",
                 "trace_triple.sfd"]
BOOK_FILES = ["product.sob", "annulus.sob", "annulus_plus.sob", "annulus_minus.sob"]


def read(name: str) -> str:
    return Path(data_path(name)).read_text()


# ------------------------------------------------------------- diagrams
def test_shipped_disk_is_the_disk():
    assert find_isomorphism(parse_diagram_file(data_path("disk.sfd")), models.d_disk()) is not None


def test_shipped_annulus_has_two_generators():
    d = parse_diagram_file(data_path("annulus.sfd"))
    assert len(enumerate_generators(d)) == 2
    assert find_isomorphism(d, models.d_ann()) is not None


@pytest.mark.parametrize("name", DIAGRAM_FILES)
def test_diagram_files_are_canonical(name):
    text = read(name)
    assert serialize_diagram(parse_diagram(text, validate=False)) == text


@pytest.mark.parametrize("keep", [3, 8, 12, 15])
def test_truncated_file_reports_a_line(keep):
    lines = read("annulus.sfd").splitlines()
    with pytest.raises(FormatError) as info:
        parse_diagram("\n".join(lines[:keep]))
    assert 1 <= info.value.line <= keep + 1


def test_truncated_mid_line_points_at_that_line():
    lines = read("annulus.sfd").splitlines()
    n = next(i for i, line in enumerate(lines) if line.startswith("c0 "))
    cut = "\n".join(lines[:n] + [lines[n][: lines[n].index(":") + 2]])
    with pytest.raises(FormatError) as info:
        parse_diagram(cut)
    assert info.value.line == n + 1


def test_comments_are_ignored_but_corner_positions_survive():
    assert parse_position("c2#0") == ("c2", 0)
    text = "# a comment\n" + read("disk.sfd").replace("\n", "  # trailing\n", 1)
    assert serialize_diagram(parse_diagram(text)) == read("disk.sfd")


# ------------------------------------------------------ positions and routes
def test_position_and_route_syntax():
    assert parse_position("e0@1/3") == ("e0", Fraction(1, 3))
    r = parse_route("e0@1/2;e7@1/3^-1,e8@2/3;e2@1/2")
    assert r.start == ("e0", Fraction(1, 2)) and r.end == ("e2", Fraction(1, 2))
    assert parse_route(format_route(r)) == r


def test_bad_position_is_reported_with_its_line():
    with pytest.raises(ValueError, match="bad fraction"):
        parse_position("e0@half")
    with pytest.raises(FormatError) as info:
        parse_script("H0\nH1 e0@half e0@2/3\n")
    assert info.value.line == 2


# ------------------------------------------------------------------ scripts
def test_demo_script_round_trips():
    script = parse_script(read("eh_demo.script"))
    assert parse_script(format_script(script)) == script


@pytest.mark.parametrize("line", ["H0 sides=5", "H1 e0@1/3 e0@2/3", "H2 plus=e0@1/2;;e2@1/2 minus=e0@1/2;;e2@1/2",
                                  "H3 e5", "F1 e0@1/3 c2#1", "F3 a0 b0", "CSTAB beta path=e1@1/3;;e2@1/2"])
def test_step_lines_round_trip(line):
    step = parse_step(line)
    assert parse_step(format_step(step)) == step


def test_unknown_step_is_a_format_error():
    with pytest.raises(FormatError):
        parse_script("H1 e0@1/3 e0@2/3\nH9 nothing\n")


# --------------------------------------------------------------- open books
@pytest.mark.parametrize("name", BOOK_FILES)
def test_open_book_files_are_canonical(name):
    text = read(name)
    assert serialize_open_book(parse_open_book(text)) == text


def test_shipped_books_match_the_models():
    books = models.shipped_open_books()
    for name in books:
        parsed = parse_open_book(read(f"{name}.sob"))
        assert parsed.images == books[name].images and parsed.arcs == books[name].arcs


# ------------------------------------------------------------------ matrices
def test_matrix_round_trip():
    m = F2Matrix.from_images([(), ("p0",)], [("p1", "p2"), ("p3",)], {(): [("p3",)], ("p0",): [("p1", "p2"), ("p3",)]})
    assert parse_matrix(format_matrix(m)) == m


# --------------------------------------------------------------- properties
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_handle_built_diagrams_round_trip(seed):
    rng = random.Random(seed)
    d, steps = helpers.random_disjoint_case(rng)
    built, _ = run_script(d, steps)
    text = serialize_diagram(built)
    again = parse_diagram(text)
    assert serialize_diagram(again) == text
    assert enumerate_generators(again) == enumerate_generators(built)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["e0", "e7", "g1"]), st.fractions(0, 1, max_denominator=50),
                          st.sampled_from([1, -1])), max_size=4),
       st.fractions(0, 1, max_denominator=50), st.fractions(0, 1, max_denominator=50))
def test_routes_round_trip(crossings, s, t):
    r = Route(("e0", s), tuple(crossings), ("e2", t))
    assert parse_route(format_route(r)) == r
