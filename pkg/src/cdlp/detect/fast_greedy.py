from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass

from cdlp.errors import EmptyGraphError
from cdlp.graph.core import Graph, Partition

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MergeStep:
    kept: int       # surviving community id (the lower of the pair)
    absorbed: int
    q: float        # modularity after this merge


@dataclass(frozen=True)
class MergeTrace:
    """
    Agglomeration history. `best_step` is the number of merges applied at the
    state with maximal Q (0 means the all-singleton start); ties go to the
    earliest state.
    """

    initial_q: float
    steps: tuple[MergeStep, ...]
    best_step: int

    @property
    def q_values(self) -> list[float]:
        return [self.initial_q] + [s.q for s in self.steps]

    @property
    def best_q(self) -> float:
        return self.q_values[self.best_step]


@dataclass(frozen=True)
class FastGreedyResult:
    partition: Partition
    q: float
    trace: MergeTrace


def fast_greedy(g: Graph) -> FastGreedyResult:
    """
    Clauset-Newman-Moore agglomeration.

    Every node starts alone; the connected community pair with the largest
    modularity gain is merged until no connected pair remains. Gains are kept
    as integers scaled by 4M^2 (dq = 2 * (2M * l_ij - K_i * K_j)), so ties are
    exact and resolve to the lowest (id, id) pair. A community's id is its
    smallest node.
    """
    m = g.edge_count
    if m == 0:
        raise EmptyGraphError()
    n = g.node_count
    two_m = 2 * m
    scale = 4 * m * m

    total_degree = [g.degree(v) for v in range(n)]
    dq: list[dict[int, int]] = [dict() for _ in range(n)]
    heap: list[tuple[int, int, int]] = []
    for a, b in g.edges():
        gain = 2 * (two_m - total_degree[a] * total_degree[b])
        dq[a][b] = gain
        dq[b][a] = gain
        heap.append((-gain, a, b))
    heapq.heapify(heap)

    alive = [True] * n
    q_num = -sum(k * k for k in total_degree)
    initial_num = q_num
    merges: list[tuple[int, int, int]] = []

    while heap:
        neg_gain, i, j = heapq.heappop(heap)
        # lazy deletion: skip entries for dead communities or outdated gains
        if not (alive[i] and alive[j]) or dq[i].get(j) != -neg_gain:
            continue
        q_num += -neg_gain

        row_i, row_j = dq[i], dq[j]
        for k in sorted((row_i.keys() | row_j.keys()) - {i, j}):
            if k in row_i and k in row_j:
                gain = row_i[k] + row_j[k]
            elif k in row_i:
                gain = row_i[k] - 2 * total_degree[j] * total_degree[k]
            else:
                gain = row_j[k] - 2 * total_degree[i] * total_degree[k]
            row_i[k] = gain
            dq[k][i] = gain
            dq[k].pop(j, None)
            heapq.heappush(heap, (-gain, min(i, k), max(i, k)))

        row_i.pop(j, None)
        dq[j] = {}
        alive[j] = False
        total_degree[i] += total_degree[j]
        total_degree[j] = 0
        merges.append((i, j, q_num))

    nums = [initial_num] + [num for _, _, num in merges]
    best = max(range(len(nums)), key=lambda s: (nums[s], -s))

    parent = list(range(n))
    for kept, absorbed, _ in merges[:best]:
        parent[absorbed] = kept

    def root(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    partition = Partition.from_labels(root(v) for v in range(n))
    trace = MergeTrace(
        initial_q=initial_num / scale,
        steps=tuple(MergeStep(kept=i, absorbed=j, q=num / scale) for i, j, num in merges),
        best_step=best,
    )
    log.debug(
        "fast_greedy N=%d M=%d merges=%d best_step=%d Q=%.6f k=%d",
        n, m, len(merges), best, nums[best] / scale, partition.community_count,
    )
    return FastGreedyResult(partition=partition, q=nums[best] / scale, trace=trace)
