import numpy as np
import pytest

from commselect import Graph


def build_two_k3():
    """Two disjoint triangles {0,1,2} and {3,4,5}, unit weights."""
    return Graph(6, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0),
                     (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0)])


def build_two_k3_bridge(bridge_w=1.0, clique_w=1.0):
    """Two triangles joined by a single bridge edge (2, 3)."""
    return Graph(6, [(0, 1, clique_w), (0, 2, clique_w), (1, 2, clique_w),
                     (3, 4, clique_w), (3, 5, clique_w), (4, 5, clique_w),
                     (2, 3, bridge_w)])


def build_path(n, w=1.0):
    return Graph(n, [(i, i + 1, w) for i in range(n - 1)])


def build_star(spokes, weights=None):
    """Star with center 0 and `spokes` leaves."""
    if weights is None:
        weights = [1.0] * spokes
    return Graph(spokes + 1, [(0, i + 1, weights[i]) for i in range(spokes)])


def build_complete(n, w=1.0):
    return Graph(n, [(i, j, w) for i in range(n) for j in range(i + 1, n)])


def random_graph(rng, n, p=0.4, weighted=True, ensure_edge=True):
    """Erdos-Renyi style test graph with optional random weights."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = float(rng.uniform(0.1, 5.0)) if weighted else 1.0
                edges.append((i, j, w))
    if ensure_edge and not edges:
        edges.append((0, 1, 1.0))
    return Graph(n, edges)


@pytest.fixture
def two_k3():
    return build_two_k3()


@pytest.fixture
def two_k3_bridge():
    return build_two_k3_bridge()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
