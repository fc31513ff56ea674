from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from cdlp.detect.fast_greedy import fast_greedy
from cdlp.errors import ConfigError, DegenerateStageError, EmptyGraphError
from cdlp.eval.nmi import nmi
from cdlp.graph.core import Graph, Partition, with_edges_added, with_edges_removed
from cdlp.linkpred.indices import AddIndex, RemoveIndex
from cdlp.linkpred.plan import plan_additions, plan_removals

log = logging.getLogger(__name__)

STAGES = ("G", "G1", "G2", "G3")


class Selection(str, Enum):
    MODULARITY = "modularity"
    NMI = "nmi"


@dataclass(frozen=True)
class PipelineConfig:
    p_d: float = 0.05          # fraction of current edges removed at each D stage
    p_a: float = 0.05          # fraction of current edge count added at the A stage
    include_raw: bool = False  # let stage G compete in selection
    selection: Selection = Selection.MODULARITY

    def __post_init__(self):
        object.__setattr__(self, "selection", Selection(self.selection))
        for name in ("p_d", "p_a"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0.0 <= v < 1.0):
                raise ConfigError(f"{name} must lie in [0, 1), got {v!r}")


@dataclass(frozen=True)
class StageRecord:
    stage: str
    graph: Graph
    partition: Partition
    q: float
    nmi: Optional[float] = None
    added: int = 0
    removed: int = 0

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count


@dataclass(frozen=True)
class PipelineResult:
    method: str
    stages: tuple[StageRecord, ...]
    chosen_stage: str
    competing: tuple[str, ...] = field(default_factory=tuple)

    def stage(self, stage_id: str) -> StageRecord:
        for rec in self.stages:
            if rec.stage == stage_id:
                return rec
        raise KeyError(stage_id)

    @property
    def chosen(self) -> StageRecord:
        return self.stage(self.chosen_stage)

    @property
    def chosen_partition(self) -> Partition:
        return self.chosen.partition

    @property
    def q(self) -> float:
        return self.chosen.q


def link_count(fraction: float, edges: int) -> int:
    """Round-half-up of fraction * edges."""
    return int(math.floor(fraction * edges + 0.5))


def select_stage(
    records: Sequence[StageRecord],
    selection: Selection | str,
    competing: Sequence[str],
) -> str:
    """Stage with the largest selection metric among `competing`; earliest wins ties."""
    selection = Selection(selection)
    best_id, best_val = None, -math.inf
    for rec in records:
        if rec.stage not in competing:
            continue
        val = rec.q if selection == Selection.MODULARITY else rec.nmi
        if val is None:
            raise ConfigError("nmi selection needs a ground-truth partition")
        if val > best_val:
            best_id, best_val = rec.stage, val
    if best_id is None:
        raise ConfigError(f"no competing stage among {list(competing)}")
    return best_id


def _detect(stage: str, g: Graph, truth: Optional[Partition], added: int = 0, removed: int = 0) -> StageRecord:
    if g.edge_count == 0:
        raise DegenerateStageError(stage)
    res = fast_greedy(g)
    score = nmi(truth, res.partition) if truth is not None else None
    log.debug(
        "stage %s M=%d k=%d Q=%.6f%s", stage, g.edge_count, res.partition.community_count, res.q,
        f" NMI={score:.4f}" if score is not None else "",
    )
    return StageRecord(stage=stage, graph=g, partition=res.partition, q=res.q, nmi=score,
                       added=added, removed=removed)


def _remove_stage(stage: str, prev: StageRecord, index: RemoveIndex, p_d: float,
                  truth: Optional[Partition]) -> StageRecord:
    count = link_count(p_d, prev.edge_count)
    plan = plan_removals(prev.graph, prev.partition, index, count)
    g = with_edges_removed(prev.graph, plan.removal_pairs())
    return _detect(stage, g, truth, removed=len(plan.removals))


def _add_stage(stage: str, prev: StageRecord, index: AddIndex, p_a: float,
               truth: Optional[Partition]) -> StageRecord:
    count = link_count(p_a, prev.edge_count)
    plan = plan_additions(prev.graph, prev.partition, index, count)
    g = with_edges_added(prev.graph, plan.addition_pairs())
    return _detect(stage, g, truth, added=len(plan.additions))


def _run_staged(
    method: str,
    g: Graph,
    cfg: PipelineConfig,
    truth: Optional[Partition],
    add_index: AddIndex,
    remove_index: RemoveIndex,
) -> PipelineResult:
    if g.edge_count == 0:
        raise EmptyGraphError()
    if cfg.selection == Selection.NMI and truth is None:
        raise ConfigError("nmi selection needs a ground-truth partition")

    s0 = _detect("G", g, truth)
    s1 = _remove_stage("G1", s0, remove_index, cfg.p_d, truth)
    s2 = _add_stage("G2", s1, add_index, cfg.p_a, truth)
    s3 = _remove_stage("G3", s2, remove_index, cfg.p_d, truth)
    records = (s0, s1, s2, s3)

    competing = STAGES if cfg.include_raw else STAGES[1:]
    chosen = select_stage(records, cfg.selection, competing)
    log.info(
        "%s: edges %s, Q %s -> chosen %s",
        method,
        "/".join(str(r.edge_count) for r in records),
        "/".join(f"{r.q:.4f}" for r in records),
        chosen,
    )
    return PipelineResult(method=method, stages=records, chosen_stage=chosen, competing=tuple(competing))


def run_cdlp(g: Graph, cfg: PipelineConfig = PipelineConfig(), truth: Optional[Partition] = None) -> PipelineResult:
    """Remove (D) / add (A) / remove (D) around fast-greedy, keeping the best stage."""
    return _run_staged("cdlp", g, cfg, truth, AddIndex.A, RemoveIndex.D)


def run_baseline2_cn(g: Graph, cfg: PipelineConfig = PipelineConfig(),
                     truth: Optional[Partition] = None) -> PipelineResult:
    """Same staging as run_cdlp, ranking all edges / non-edges by common neighbours."""
    return _run_staged("baseline2-cn", g, cfg, truth, AddIndex.CN, RemoveIndex.CN)


def run_baseline1(g: Graph, truth: Optional[Partition] = None) -> PipelineResult:
    """Plain fast-greedy on the raw network."""
    if g.edge_count == 0:
        raise EmptyGraphError()
    s0 = _detect("G", g, truth)
    return PipelineResult(method="baseline1", stages=(s0,), chosen_stage="G", competing=("G",))


METHODS = {
    "baseline1": lambda g, cfg, truth: run_baseline1(g, truth),
    "baseline2-cn": run_baseline2_cn,
    "cdlp": run_cdlp,
}


def run_method(method: str, g: Graph, cfg: PipelineConfig, truth: Optional[Partition] = None) -> PipelineResult:
    try:
        fn = METHODS[method]
    except KeyError:
        raise ConfigError(f"Unknown method: {method!r}; expected one of {sorted(METHODS)}") from None
    return fn(g, cfg, truth)
