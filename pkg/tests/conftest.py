import numpy as np
import pytest

import fracset as fs


@pytest.fixture
def b6():
    """Barbell: triangles {0,1,2} and {3,4,5} joined by the bridge (2,3)."""
    return fs.Graph.from_edges(
        6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


@pytest.fixture
def path3():
    return fs.Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
