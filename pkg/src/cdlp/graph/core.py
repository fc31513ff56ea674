from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from cdlp.errors import ContractError, InputError

Edge = tuple[int, int]


def canonical(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph on dense node ids 0..N-1.

    Values are snapshots: the with_edges_* helpers return new graphs and never
    touch the source, so several pipeline stages can hold their own graph.
    """

    node_count: int
    adjacency: tuple[frozenset[int], ...]
    edge_count: int = field(compare=False)

    def __post_init__(self):
        if len(self.adjacency) != self.node_count:
            raise InputError(
                f"adjacency has {len(self.adjacency)} rows for {self.node_count} nodes"
            )
        _check_invariants(self)

    def degree(self, a: int) -> int:
        return len(self.adjacency[a])

    def neighbors(self, a: int) -> frozenset[int]:
        return self.adjacency[a]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def edges(self) -> Iterator[Edge]:
        """Canonical (a < b) edges in lexicographic order."""
        for a, nbrs in enumerate(self.adjacency):
            for b in sorted(nbrs):
                if a < b:
                    yield (a, b)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.fromiter((len(n) for n in self.adjacency), dtype=np.int64, count=self.node_count)

    @cached_property
    def adjacency_matrix(self) -> sparse.csr_matrix:
        """Symmetric 0/1 CSR adjacency, int64."""
        edges = np.array(list(self.edges()), dtype=np.int64).reshape(-1, 2)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(rows.size, dtype=np.int64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.node_count, self.node_count))


def _check_invariants(g: Graph) -> None:
    degree_sum = 0
    for a, nbrs in enumerate(g.adjacency):
        if a in nbrs:
            raise InputError(f"self-loop on node {a}")
        for b in nbrs:
            if not 0 <= b < g.node_count:
                raise InputError(f"neighbor id {b} of node {a} out of range [0, {g.node_count})")
            if a not in g.adjacency[b]:
                raise InputError(f"asymmetric adjacency between {a} and {b}")
        degree_sum += len(nbrs)
    if degree_sum != 2 * g.edge_count:
        raise InputError(f"degree sum {degree_sum} != 2 * edge_count {g.edge_count}")


def _check_node(g_or_n: Graph | int, a: int) -> None:
    n = g_or_n.node_count if isinstance(g_or_n, Graph) else g_or_n
    if not isinstance(a, (int, np.integer)) or not 0 <= a < n:
        raise InputError(f"node id {a!r} out of range [0, {n})")


def _freeze(adj: list[set[int]], n: int) -> Graph:
    m = sum(len(s) for s in adj) // 2
    return Graph(node_count=n, adjacency=tuple(frozenset(s) for s in adj), edge_count=m)


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from node-id pairs; repeated and reversed pairs collapse to one edge."""
    if n < 1:
        raise InputError(f"node count must be >= 1, got {n}")
    adj: list[set[int]] = [set() for _ in range(n)]
    for pair in edges:
        a, b = int(pair[0]), int(pair[1])
        _check_node(n, a)
        _check_node(n, b)
        if a == b:
            raise InputError(f"self-loop ({a}, {a}) is not allowed")
        adj[a].add(b)
        adj[b].add(a)
    return _freeze(adj, n)


def common_neighbors(g: Graph, a: int, b: int) -> frozenset[int]:
    _check_node(g, a)
    _check_node(g, b)
    if a == b:
        raise InputError(f"common neighbors need two distinct nodes, got ({a}, {b})")
    return g.adjacency[a] & g.adjacency[b]


def with_edges_added(g: Graph, edges: Iterable[Sequence[int]]) -> Graph:
    adj = [set(s) for s in g.adjacency]
    for pair in edges:
        a, b = int(pair[0]), int(pair[1])
        _check_node(g, a)
        _check_node(g, b)
        if a == b:
            raise ContractError(f"cannot add self-loop ({a}, {a})")
        if b in adj[a]:
            raise ContractError(f"cannot add ({a}, {b}): edge already present")
        adj[a].add(b)
        adj[b].add(a)
    return _freeze(adj, g.node_count)


def with_edges_removed(g: Graph, edges: Iterable[Sequence[int]]) -> Graph:
    adj = [set(s) for s in g.adjacency]
    for pair in edges:
        a, b = int(pair[0]), int(pair[1])
        _check_node(g, a)
        _check_node(g, b)
        if b not in adj[a]:
            raise ContractError(f"cannot remove ({a}, {b}): not an edge")
        adj[a].discard(b)
        adj[b].discard(a)
    return _freeze(adj, g.node_count)


@dataclass(frozen=True)
class Partition:
    """Node -> community assignment with dense, non-empty community ids 0..k-1."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        if not self.assignment:
            raise InputError("partition must cover at least one node")
        k = max(self.assignment) + 1
        seen = set(self.assignment)
        if min(self.assignment) < 0 or len(seen) != k:
            raise InputError("community ids must be dense integers 0..k-1 with no empty community")

    @classmethod
    def from_labels(cls, labels: Iterable[Hashable]) -> "Partition":
        """Relabel arbitrary labels to dense ids in order of first appearance."""
        mapping: dict[Hashable, int] = {}
        out = []
        for lab in labels:
            if lab not in mapping:
                mapping[lab] = len(mapping)
            out.append(mapping[lab])
        return cls(tuple(out))

    @classmethod
    def from_communities(cls, communities: Iterable[Iterable[int]], n: int) -> "Partition":
        labels: list[int | None] = [None] * n
        for cid, members in enumerate(communities):
            for v in members:
                if labels[v] is not None:
                    raise InputError(f"node {v} assigned to more than one community")
                labels[v] = cid
        missing = [v for v, lab in enumerate(labels) if lab is None]
        if missing:
            raise InputError(f"nodes without community: {missing[:10]}")
        return cls.from_labels(labels)

    @property
    def node_count(self) -> int:
        return len(self.assignment)

    @cached_property
    def community_count(self) -> int:
        return max(self.assignment) + 1

    @cached_property
    def community_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.community_count
        for c in self.assignment:
            sizes[c] += 1
        return tuple(sizes)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.int64)

    def community_of(self, a: int) -> int:
        return self.assignment[a]

    def same_community(self, a: int, b: int) -> bool:
        return self.assignment[a] == self.assignment[b]

    def communities(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.community_count)]
        for v, c in enumerate(self.assignment):
            groups[c].append(v)
        return groups

    def canonical(self) -> "Partition":
        return Partition.from_labels(self.assignment)


def check_covers(g: Graph, p: Partition) -> None:
    if p.node_count != g.node_count:
        raise InputError(f"partition covers {p.node_count} nodes, graph has {g.node_count}")
