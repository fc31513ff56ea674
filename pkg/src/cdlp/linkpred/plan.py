from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from cdlp.errors import InputError
from cdlp.graph.core import Graph, Partition, check_covers
from cdlp.linkpred.indices import AddIndex, RemoveIndex, ScoredPair

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MutationPlan:
    additions: tuple[ScoredPair, ...] = field(default_factory=tuple)
    removals: tuple[ScoredPair, ...] = field(default_factory=tuple)

    def addition_pairs(self) -> list[tuple[int, int]]:
        return [s.pair for s in self.additions]

    def removal_pairs(self) -> list[tuple[int, int]]:
        return [s.pair for s in self.removals]


def _intra_matrix(g: Graph, p: Partition) -> sparse.csr_matrix:
    """Adjacency restricted to edges whose endpoints share a community."""
    coo = g.adjacency_matrix.tocoo()
    keep = p.labels[coo.row] == p.labels[coo.col]
    return sparse.csr_matrix(
        (coo.data[keep], (coo.row[keep], coo.col[keep])), shape=coo.shape
    )


def _pick(a: np.ndarray, b: np.ndarray, score: np.ndarray, count: int, descending: bool) -> tuple[ScoredPair, ...]:
    # np.lexsort: last key is primary; canonical pair order breaks score ties
    primary = -score if descending else score
    order = np.lexsort((b, a, primary))[:count]
    return tuple(ScoredPair(int(a[i]), int(b[i]), float(score[i])) for i in order)


def _edge_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    edges = np.array(list(g.edges()), dtype=np.int64).reshape(-1, 2)
    return edges[:, 0], edges[:, 1]


def addition_candidates(g: Graph, p: Partition, index: AddIndex) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, score) arrays over every candidate non-edge, a < b."""
    adj = g.adjacency_matrix
    nonedge = np.triu(adj.toarray() == 0, k=1)
    if index == AddIndex.A:
        labels = p.labels
        nonedge &= labels[:, None] == labels[None, :]
        intra = _intra_matrix(g, p)
        shared = (intra @ intra).toarray()
        a, b = np.nonzero(nonedge)
        den = g.degrees[a] + g.degrees[b]
        num = shared[a, b]
        score = np.zeros(a.size, dtype=float)
        ok = den > 0
        score[ok] = 2.0 * num[ok] / den[ok]
    else:
        a, b = np.nonzero(nonedge)
        score = (adj @ adj).toarray()[a, b].astype(float)
    return a.astype(np.int64), b.astype(np.int64), score


def removal_candidates(g: Graph, p: Partition, index: RemoveIndex) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, score) arrays over every candidate edge, a < b."""
    adj = g.adjacency_matrix
    a, b = _edge_arrays(g)
    if a.size == 0:
        return a, b, np.zeros(0)
    cn = np.asarray((adj @ adj)[a, b]).ravel().astype(float)
    if index == RemoveIndex.CN:
        return a, b, cn

    labels = p.labels
    cross = labels[a] != labels[b]
    a, b, cn = a[cross], b[cross], cn[cross]
    if a.size == 0:
        return a, b, cn
    intra = _intra_matrix(g, p)
    # (intra @ adj)[a, b]: common neighbours inside C(a); (adj @ intra)[a, b]: inside C(b)
    in_a = np.asarray((intra @ adj)[a, b]).ravel()
    in_b = np.asarray((adj @ intra)[a, b]).ravel()
    score = np.zeros(a.size, dtype=float)
    ok = cn > 0
    score[ok] = np.maximum(in_a, in_b)[ok] / cn[ok]
    return a, b, score


def plan_additions(g: Graph, p: Partition, index: AddIndex | str, count: int) -> MutationPlan:
    """Top-`count` non-edges by decreasing score."""
    check_covers(g, p)
    if count < 0:
        raise InputError(f"addition count must be >= 0, got {count}")
    index = AddIndex(index)
    if count == 0:
        return MutationPlan()
    a, b, score = addition_candidates(g, p, index)
    picked = _pick(a, b, score, count, descending=True)
    log.debug("plan_additions index=%s candidates=%d picked=%d", index.value, a.size, len(picked))
    return MutationPlan(additions=picked)


def plan_removals(g: Graph, p: Partition, index: RemoveIndex | str, count: int) -> MutationPlan:
    """Bottom-`count` edges by increasing score."""
    check_covers(g, p)
    if count < 0:
        raise InputError(f"removal count must be >= 0, got {count}")
    index = RemoveIndex(index)
    if count == 0:
        return MutationPlan()
    a, b, score = removal_candidates(g, p, index)
    picked = _pick(a, b, score, count, descending=False)
    log.debug("plan_removals index=%s candidates=%d picked=%d", index.value, a.size, len(picked))
    return MutationPlan(removals=picked)
