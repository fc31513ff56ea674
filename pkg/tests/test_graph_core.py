from __future__ import annotations

import pytest

from cdlp.errors import ContractError, InputError
from cdlp.graph.core import (
    Partition,
    build_graph,
    common_neighbors,
    with_edges_added,
    with_edges_removed,
)

from conftest import random_graph


def test_triangle(triangle):
    assert triangle.edge_count == 3
    assert [triangle.degree(v) for v in range(3)] == [2, 2, 2]


def test_reversed_pair_is_deduplicated():
    g = build_graph(2, [(0, 1), (1, 0)])
    assert g.edge_count == 1


def test_worked_example_edge_count(worked):
    g, _ = worked
    assert g.edge_count == 9
    assert g.node_count == 7


@pytest.mark.parametrize("edges", [[(0, 3)], [(-1, 0)]])
def test_out_of_range_ids_rejected(edges):
    with pytest.raises(InputError):
        build_graph(3, edges)


def test_self_loop_rejected():
    with pytest.raises(InputError):
        build_graph(3, [(1, 1)])


def test_common_neighbors(triangle):
    path = build_graph(3, [(0, 1), (1, 2)])
    assert common_neighbors(triangle, 0, 1) == {2}
    assert common_neighbors(path, 0, 2) == {1}
    assert common_neighbors(path, 0, 1) == frozenset()


def test_common_neighbors_invalid_id(triangle):
    with pytest.raises(InputError):
        common_neighbors(triangle, 0, 5)


def test_common_neighbors_symmetric():
    for seed in range(20):
        g = random_graph(seed)
        for a in range(g.node_count):
            for b in range(a + 1, g.node_count):
                assert common_neighbors(g, a, b) == common_neighbors(g, b, a)


def test_remove_and_add(triangle):
    path = with_edges_removed(triangle, [(0, 1)])
    assert path.edge_count == 2
    assert triangle.edge_count == 3
    assert triangle.has_edge(0, 1)

    back = with_edges_added(path, [(0, 1)])
    assert back == triangle
    assert not path.has_edge(0, 1)


def test_contract_violations(triangle):
    with pytest.raises(ContractError):
        with_edges_added(triangle, [(0, 1)])
    path = with_edges_removed(triangle, [(0, 1)])
    with pytest.raises(ContractError):
        with_edges_removed(path, [(0, 1)])


def test_invariants_hold_after_mutation():
    for seed in range(30):
        g = random_graph(seed)
        edges = list(g.edges())
        h = with_edges_removed(g, edges[: len(edges) // 2])
        assert sum(h.degree(v) for v in range(h.node_count)) == 2 * h.edge_count
        for a in range(h.node_count):
            assert a not in h.neighbors(a)
            for b in h.neighbors(a):
                assert a in h.neighbors(b)


def test_edges_are_canonical_and_sorted(worked):
    g, _ = worked
    edges = list(g.edges())
    assert edges == sorted(edges)
    assert all(a < b for a, b in edges)


def test_partition_validation():
    with pytest.raises(InputError):
        Partition((0, 2, 2))
    p = Partition.from_labels(["x", "y", "x", "z"])
    assert p.assignment == (0, 1, 0, 2)
    assert p.community_count == 3
    assert p.community_sizes == (2, 1, 1)
    assert sum(p.community_sizes) == p.node_count


def test_partition_from_communities_rejects_overlap():
    with pytest.raises(InputError):
        Partition.from_communities([[0, 1], [1, 2]], 3)
    with pytest.raises(InputError):
        Partition.from_communities([[0, 1]], 3)


def test_adjacency_matrix_matches_sets(worked):
    g, _ = worked
    dense = g.adjacency_matrix.toarray()
    assert (dense == dense.T).all()
    assert dense.sum() == 2 * g.edge_count
    for a, b in g.edges():
        assert dense[a, b] == 1
