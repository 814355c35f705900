"""
Shared graph fixtures.
"""
import itertools

import numpy as np
import pytest

from lexcluster.models.graph import Graph
from lexcluster.services.graph_service import from_edges


@pytest.fixture
def triangle() -> Graph:
    return from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path5() -> Graph:
    return from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def star() -> Graph:
    return from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture
def clique4() -> Graph:
    return from_edges(4, itertools.combinations(range(4), 2))


@pytest.fixture
def bridge() -> Graph:
    """Triangles A = {0, 1, 2} and B = {3, 4, 5} joined by the edge 2-3."""
    return from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def two_triangles() -> Graph:
    return from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def random_graph(
    seed: int,
    n: int | None = None,
    p: float | None = None,
    weighted: bool = False,
) -> Graph:
    """G(n, p) graph, optionally with weights in [0.5, 4)."""
    rng = np.random.default_rng(seed)
    n = n if n is not None else int(rng.integers(2, 61))
    p = p if p is not None else float(rng.uniform(0.05, 0.5))
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    if not pairs:
        pairs = [(0, 1)]
    weights = rng.uniform(0.5, 4.0, len(pairs)) if weighted else None
    return from_edges(n, pairs, weights)


def random_labels(g: Graph, seed: int, k: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    k = k if k is not None else int(rng.integers(1, max(2, g.n // 3) + 1))
    return rng.integers(0, k, g.n)


@pytest.fixture
def make_random_graph():
    return random_graph
