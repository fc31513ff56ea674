from __future__ import annotations

import numpy as np

from cdlp.errors import EmptyGraphError
from cdlp.graph.core import Graph, Partition, check_covers


def external_degrees(g: Graph, p: Partition) -> np.ndarray:
    """Per-node count of neighbours outside the node's community."""
    check_covers(g, p)
    labels = p.labels
    return np.array(
        [sum(1 for u in g.neighbors(v) if labels[u] != labels[v]) for v in range(g.node_count)],
        dtype=np.int64,
    )


def realized_mixing(g: Graph, p: Partition) -> float:
    """Cross-community edge endpoints over 2M."""
    if g.edge_count == 0:
        raise EmptyGraphError()
    return float(external_degrees(g, p).sum()) / (2 * g.edge_count)


def degree_stats(g: Graph) -> dict:
    deg = g.degrees
    return {
        "mean_degree": float(deg.mean()),
        "min_degree": int(deg.min()),
        "max_degree": int(deg.max()),
        "edges": int(g.edge_count),
    }
