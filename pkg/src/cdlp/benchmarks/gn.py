from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from cdlp.config import defaults
from cdlp.errors import ConfigError
from cdlp.graph.core import Graph, Partition, build_graph

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GnConfig:
    z_out: float
    n: int = defaults.GN_NODES
    groups: int = defaults.GN_GROUPS
    group_size: int = defaults.GN_GROUP_SIZE
    avg_degree: float = defaults.GN_AVG_DEGREE

    def __post_init__(self):
        if self.groups * self.group_size != self.n:
            raise ConfigError(f"groups * group_size = {self.groups * self.group_size} != n = {self.n}")
        if self.groups < 2 or self.group_size < 2:
            raise ConfigError("GN needs at least 2 groups of at least 2 nodes")
        if not 0.0 <= self.z_out <= self.avg_degree:
            raise ConfigError(f"z_out must lie in [0, {self.avg_degree}], got {self.z_out}")
        for name, p in (("p_in", self.p_in), ("p_out", self.p_out)):
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} = {p:.4f} is not a probability")

    @property
    def z_in(self) -> float:
        return self.avg_degree - self.z_out

    @property
    def p_in(self) -> float:
        return self.z_in / (self.group_size - 1)

    @property
    def p_out(self) -> float:
        return self.z_out / (self.n - self.group_size)


def generate_gn(cfg: GnConfig, seed: int) -> tuple[Graph, Partition]:
    """Planted partition with equal groups; every pair is an independent coin flip."""
    rng = np.random.default_rng(seed)
    # groups are scattered over node ids; every tie-break downstream goes by id
    labels = rng.permutation(np.repeat(np.arange(cfg.groups), cfg.group_size))
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, cfg.p_in, cfg.p_out)

    draws = rng.random((cfg.n, cfg.n))
    a, b = np.nonzero(np.triu(draws < prob, k=1))
    g = build_graph(cfg.n, zip(a.tolist(), b.tolist()))
    log.debug("GN z_out=%.2f seed=%d: M=%d", cfg.z_out, seed, g.edge_count)
    return g, Partition.from_labels(labels.tolist())
