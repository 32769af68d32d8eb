"""Chain-level sutured Floer computations on glued polygon diagrams.

Submodules: ``diagram_core`` (diagrams, generators, gradings), ``flinalg``
(linear algebra over F2), ``differential`` (bigon counts), ``polygons``
(triangle maps), ``contact_handles`` (handle and stabilization maps),
``open_book`` (partial open books and contact classes), ``pairings``
(trace, cotrace and duality) and ``cli``.
"""

from __future__ import annotations

__version__ = "0.1.0"

from importlib.resources import files


def data_path(name: str):
    """Path of a shipped example file, e.g. ``data_path("annulus.sfd")``."""
    return files(__name__) / "data" / name
