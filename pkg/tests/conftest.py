import json

import pytest

from condcolor.condcolor_modules import solver
from condcolor.condcolor_modules.graph_core import (
    complete,
    complete_bipartite,
    cycle,
    gear,
    path,
)


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def star3():
    """K_{1,3}: center id 0, leaves 1..3."""
    return complete_bipartite(1, 3)


@pytest.fixture
def small_graphs():
    return {
        "P3": path(3),
        "P5": path(5),
        "C4": cycle(4),
        "C5": cycle(5),
        "K4": complete(4),
        "K33": complete_bipartite(3, 3),
        "gear3": gear(3),
    }


@pytest.fixture
def instant_timeout(monkeypatch):
    """Poll the deadline on every search node so a tiny timeout fires immediately."""
    monkeypatch.setattr(solver, "_CLOCK_STRIDE", 1)
    return 1e-6


@pytest.fixture
def write_config(tmp_path):
    def _write(entries, **extra):
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps({"entries": entries, **extra}), encoding="utf-8")
        return path

    return _write
