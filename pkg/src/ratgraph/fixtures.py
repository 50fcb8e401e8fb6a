"""Small example objects shipped with the package (see ``data/``)."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .io import load

NAMES = {
    "grid": "grid.json",
    "anbn_tiling": "anbn_tiling.json",
    "anbn_columns": "anbn_columns.json",
    "anbn_columns_o": "anbn_columns_o.json",
    "g0": "g0.json",
    "anbn_ca": "anbn_ca.json",
    "anbn_sequential": "anbn_sequential.json",
    "anbn_growing": "anbn_growing.json",
}


def fixture_path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(NAMES)}")
    return Path(str(resources.files("ratgraph") / "data" / NAMES[name]))


def fixture(name: str):
    return load(fixture_path(name))


def grid():
    """The grid: ``A^m B^n`` with ``a`` adding an ``A`` and ``b`` adding a ``B``; from ``ε`` to ``A*B*``."""
    return fixture("grid")


def anbn_tiling():
    """Twenty tiles whose frontier language is ``{a^n b^n : n >= 1}``."""
    return fixture("anbn_tiling")


def anbn_columns():
    """Column graph of the ``a^n b^n`` tiling, from ``##(#*)`` to ``b*⊥``."""
    return fixture("anbn_columns")


def anbn_columns_o():
    """The same graph with ``o`` in place of ``#``, from ``o*`` to ``b*⊥`` (disjoint sets)."""
    return fixture("anbn_columns_o")


def g0():
    """A rational graph whose out-degree at distance ``n`` from ``A`` is ``2^(2^(n+1))``."""
    return fixture("g0")


def anbn_ca():
    """Deterministic cellular automaton accepting ``a^n b^n``."""
    return fixture("anbn_ca")


def anbn_sequential():
    """Sequential synchronous graph accepting ``a^n b^n`` from ``o*``."""
    return fixture("anbn_sequential")


def anbn_growing():
    """Left-synchronized graph of finite out-degree accepting ``a^n b^n`` from the empty vertex."""
    return fixture("anbn_growing")
