from __future__ import annotations

import numpy as np

from cdlp.errors import EmptyGraphError
from cdlp.graph.core import Graph, Partition, check_covers


def modularity_numerator(g: Graph, p: Partition) -> int:
    """
    Q scaled by 4M^2, as an exact integer.

    Per community c with L_c internal edges and total degree K_c the
    contribution is 4M*L_c - K_c^2; Q is the sum divided by 4M^2.
    """
    check_covers(g, p)
    m = g.edge_count
    if m == 0:
        raise EmptyGraphError()
    labels = p.labels
    k = p.community_count

    internal = np.zeros(k, dtype=np.int64)
    for a, b in g.edges():
        if labels[a] == labels[b]:
            internal[labels[a]] += 1
    total_degree = np.bincount(labels, weights=g.degrees, minlength=k).astype(np.int64)

    return int(sum(4 * m * int(lc) - int(kc) * int(kc) for lc, kc in zip(internal, total_degree)))


def modularity(g: Graph, p: Partition) -> float:
    """Newman-Girvan modularity with null model k_i k_j / 2M."""
    m = g.edge_count
    if m == 0:
        raise EmptyGraphError()
    return modularity_numerator(g, p) / (4 * m * m)
