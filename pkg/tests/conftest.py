import os

import hypothesis
import numpy as np
import pytest

from channel.config import reset_config
from channel.schemas import Tolerances

np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=400, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _fresh_config(monkeypatch):
    for name in ("DIAMOND_TOL", "DIAMOND_WORKERS", "DIAMOND_LOG_LEVEL", "DIAMOND_GRID_POINTS"):
        monkeypatch.delenv(name, raising=False)
    reset_config()
    yield
    reset_config()


@pytest.fixture
def tol():
    return Tolerances()


def _refined_max(objective, lo, hi, points=1_000_001, refine=10_001):
    if hi <= lo:
        return float(np.asarray(objective(np.array([lo])))[0])
    grid = np.linspace(lo, hi, points)
    vals = np.asarray(objective(grid), dtype=float)
    k = int(np.argmax(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, points - 1)]
    fine = np.linspace(a, b, refine)
    return max(float(vals[k]), float(np.max(objective(fine))))


@pytest.fixture
def grid_max():
    """Brute-force max of a vectorised objective: 10^6-point grid, then a local refinement."""
    return _refined_max
