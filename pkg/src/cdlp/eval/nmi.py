from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cdlp.errors import InputError
from cdlp.graph.core import Partition


@dataclass(frozen=True)
class ConfusionTable:
    """n_ij = nodes of true community i that landed in computed community j."""

    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: int


def confusion_table(truth: Partition, computed: Partition) -> ConfusionTable:
    if truth.node_count != computed.node_count:
        raise InputError(
            f"partitions cover different node sets ({truth.node_count} vs {computed.node_count} nodes)"
        )
    k1, k2 = truth.community_count, computed.community_count
    flat = truth.labels * k2 + computed.labels
    counts = np.bincount(flat, minlength=k1 * k2).reshape(k1, k2)
    return ConfusionTable(
        counts=counts,
        row_sums=counts.sum(axis=1),
        col_sums=counts.sum(axis=0),
        total=int(counts.sum()),
    )


def nmi(truth: Partition, computed: Partition) -> float:
    """
    Normalized mutual information with geometric-mean normalization, natural log.

    If either side has a single community the normalizer vanishes; the score is
    then 1 for identical set partitions and 0 otherwise.
    """
    table = confusion_table(truth, computed)
    if truth.community_count == 1 or computed.community_count == 1:
        return 1.0 if truth.canonical() == computed.canonical() else 0.0

    n = float(table.total)
    nij = table.counts.astype(float)
    ni = table.row_sums.astype(float)
    nj = table.col_sums.astype(float)

    rows, cols = np.nonzero(nij)
    cells = nij[rows, cols]
    num = float(np.sum(cells * np.log(cells * n / (ni[rows] * nj[cols]))))
    den = float(np.sqrt(np.sum(ni * np.log(ni / n)) * np.sum(nj * np.log(nj / n))))
    return float(min(max(num / den, 0.0), 1.0))
