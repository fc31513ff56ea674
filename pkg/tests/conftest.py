from __future__ import annotations

import numpy as np
import pytest

from cdlp.graph.core import Graph, Partition, build_graph

# Two-community worked example; external ids 1..7 map to nodes 0..6.
WORKED_EDGES = [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (2, 7), (5, 6), (5, 7), (6, 7)]
WORKED_COMMUNITIES = [[1, 2, 3, 4, 5], [6, 7]]


def node(label: int) -> int:
    return label - 1


def random_graph(seed: int, n_lo: int = 3, n_hi: int = 12) -> Graph:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    p = float(rng.uniform(0.2, 0.6))
    a, b = np.nonzero(np.triu(rng.random((n, n)) < p, k=1))
    edges = list(zip(a.tolist(), b.tolist())) or [(0, 1)]
    return build_graph(n, edges)


def random_partition(n: int, seed: int, max_k: int = 4) -> Partition:
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_k + 1))
    return Partition.from_labels(rng.integers(0, k, size=n).tolist())


@pytest.fixture
def worked() -> tuple[Graph, Partition]:
    g = build_graph(7, [(node(a), node(b)) for a, b in WORKED_EDGES])
    p = Partition.from_communities([[node(v) for v in c] for c in WORKED_COMMUNITIES], 7)
    return g, p


@pytest.fixture
def triangle() -> Graph:
    return build_graph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def two_triangles() -> tuple[Graph, Partition]:
    g = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    return g, Partition((0, 0, 0, 1, 1, 1))


@pytest.fixture
def bridged_triangles() -> tuple[Graph, Partition]:
    g = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    return g, Partition((0, 0, 0, 1, 1, 1))
