"""
Pytest configuration and fixtures for the vertex-nomination toolkit tests.
"""

import pytest
import numpy as np

from graphs import Graph
from models import SbmParams, make_nominatable_pair, sample_corr_sbm

# Block probabilities of the standard two-block simulation
SIM_B = [[0.4, 0.3], [0.3, 0.5]]
SIM_PI = [0.5, 0.5]

PATH_EDGES = [(1, 2), (2, 3)]

TWO_TRIANGLE_EDGES = [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]

EDGE_LIST_TEXT = """# friendship network
a b
b c
c d 2.5
"""

@pytest.fixture
def path_graph():
    """Path 1-2-3."""
    return Graph.from_edges([1, 2, 3], PATH_EDGES)

@pytest.fixture
def two_triangles():
    """Two disjoint triangles on 1..6."""
    return Graph.from_edges(range(1, 7), TWO_TRIANGLE_EDGES)

@pytest.fixture
def star_graph():
    """Star with center 1 and leaves 2..5."""
    return Graph.from_edges(range(1, 6), [(1, v) for v in range(2, 6)])

@pytest.fixture
def sim_params():
    return SbmParams(200, SIM_B, SIM_PI)

@pytest.fixture
def separated_params():
    """Well separated two-block model, small enough for fast pipeline tests."""
    return SbmParams(120, [[0.6, 0.05], [0.05, 0.6]], SIM_PI)

@pytest.fixture
def correlated_pair(separated_params):
    """Highly correlated pair sharing every vertex, all vertices of interest."""
    g1, g2, blocks = sample_corr_sbm(0.9, separated_params, 7)
    return make_nominatable_pair(g1, g2, blocks)

@pytest.fixture
def rng():
    return np.random.default_rng(12345)

@pytest.fixture
def edge_list_file(tmp_path):
    path = tmp_path / 'g.edgelist'
    path.write_text(EDGE_LIST_TEXT)
    return str(path)
