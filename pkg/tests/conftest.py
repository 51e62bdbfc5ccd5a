import math

import numpy as np
import pytest

from graph.state import Graph


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def path3():
    """P_3: 0 - 1 - 2."""
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def cycle4():
    """4-cycle 0 - 1 - 2 - 3 - 0; 0 and 2 are not adjacent."""
    return Graph.from_edges([(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def star5():
    return Graph.from_edges([(0, 1), (0, 2), (0, 3), (0, 4)])


def assert_binomial(hits: int, trials: int, p: float, bound: float = 5.0):
    """hits/trials within `bound` standard errors of p."""
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= bound * sigma, (hits / trials, p, sigma)
