"""Shared builders for the test suite."""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sfkit import models  # noqa: E402

F = Fraction


@pytest.fixture(scope="session")
def small_diagrams():
    return {"disk": models.d_disk(), "annulus": models.d_ann(), "two_holes": models.two_holes()}


@pytest.fixture(scope="session")
def open_books():
    return models.shipped_open_books()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(f"criterion {n:2d} ... {'PASS' if results[n] else 'FAIL'}")
