import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from netclust.network import Network

sys.path.insert(0, os.path.dirname(__file__))

DATA = Path(__file__).resolve().parents[1] / "src" / "netclust" / "data"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def data_dir() -> Path:
    return DATA


def labels(n):
    return tuple(f"x{i + 1}" for i in range(n))


def net_from(grid) -> Network:
    grid = np.asarray(grid, dtype=float)
    return Network(labels(grid.shape[0]), grid)


@st.composite
def networks(draw, min_n=2, max_n=5, symmetric=False, integer=True):
    n = draw(st.integers(min_n, max_n))
    if integer:
        vals = st.integers(1, 9).map(float)
    else:
        vals = st.floats(0.01, 100.0, allow_nan=False, allow_infinity=False)
    cells = draw(st.lists(vals, min_size=n * n, max_size=n * n))
    grid = np.array(cells).reshape(n, n)
    if symmetric:
        grid = np.triu(grid, 1)
        grid = grid + grid.T
    np.fill_diagonal(grid, 0.0)
    return net_from(grid)
