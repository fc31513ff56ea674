from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from itertools import product

import numpy as np
import pandas as pd

from cdlp.benchmarks.gn import GnConfig, generate_gn
from cdlp.benchmarks.lfr import LfrConfig, generate_lfr_with_stats
from cdlp.benchmarks.mixing import degree_stats, realized_mixing
from cdlp.config import defaults
from cdlp.config.experiment import ExperimentSpec
from cdlp.graph.core import Graph, Partition
from cdlp.pipeline.stages import PipelineConfig, run_method, select_stage

log = logging.getLogger(__name__)

FAMILY_CODES = {"gn": 1, "lfr": 2}

ROW_COLUMNS = [
    "family", "sweep_value", "method", "selection", "p_d", "p_a", "instance", "seed",
    "status", "nmi", "q", "chosen_stage", "communities", "wall_time", "error",
]


def instance_seed(master_seed: int, family: str, sweep_value: float, instance: int) -> int:
    """
    Graph seed for one benchmark instance.

    SeedSequence([master, family code, round(value * 1e6), instance]); every
    method evaluated at that (sweep value, instance) sees the same graph.
    """
    entropy = [int(master_seed), FAMILY_CODES[family], int(round(sweep_value * 1e6)), int(instance)]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def make_benchmark(spec: ExperimentSpec, sweep_value: float, seed: int) -> tuple[Graph, Partition, dict]:
    if spec.family == "gn":
        cfg: GnConfig | LfrConfig = GnConfig(z_out=sweep_value, **spec.gn)
    else:
        cfg = LfrConfig(mu=sweep_value, **spec.lfr)
    return generate_benchmark(cfg, seed)


def generate_benchmark(cfg: GnConfig | LfrConfig, seed: int) -> tuple[Graph, Partition, dict]:
    """Graph, planted partition and an audit record (config, seed, RNG id, realized stats)."""
    if isinstance(cfg, GnConfig):
        family = "gn"
        g, truth = generate_gn(cfg, seed)
        extra: dict = {}
    else:
        family = "lfr"
        g, truth, stats = generate_lfr_with_stats(cfg, seed)
        extra = stats.as_dict()
    meta = {
        "family": family,
        "config": asdict(cfg),
        "seed": seed,
        "rng": defaults.RNG_ALGORITHM,
        "realized_mu": realized_mixing(g, truth) if g.edge_count else 0.0,
        "communities": truth.community_count,
        **degree_stats(g),
        **extra,
    }
    return g, truth, meta


def _row(spec: ExperimentSpec, value: float, instance: int, seed: int, method: str, selection: str,
         p_d: float, p_a: float) -> dict:
    return {
        "family": spec.family, "sweep_value": value, "method": method, "selection": selection,
        "p_d": p_d, "p_a": p_a, "instance": instance, "seed": seed,
        "status": "ok", "nmi": float("nan"), "q": float("nan"), "chosen_stage": "",
        "communities": 0, "wall_time": 0.0, "error": "",
    }


def _method_settings(spec: ExperimentSpec, method: str) -> list[tuple[float, float, list[str]]]:
    if method == "baseline1":
        return [(0.0, 0.0, ["none"])]
    return [(float(d), float(a), list(spec.selections)) for d, a in product(spec.p_d, spec.p_a)]


def run_cell(spec: ExperimentSpec, value: float, instance: int) -> list[dict]:
    """Generate one benchmark instance and evaluate every configured method on it."""
    seed = instance_seed(spec.master_seed, spec.family, value, instance)
    rows: list[dict] = []
    try:
        g, truth, _ = make_benchmark(spec, value, seed)
    except Exception as e:
        log.error("%s %.3g #%d: generation failed: %s", spec.family, value, instance, e)
        for method in spec.methods:
            for p_d, p_a, sels in _method_settings(spec, method):
                for sel in sels:
                    row = _row(spec, value, instance, seed, method, sel, p_d, p_a)
                    row.update(status="failed", error=f"{type(e).__name__}: {e}")
                    rows.append(row)
        return rows

    for method in spec.methods:
        for p_d, p_a, sels in _method_settings(spec, method):
            cfg = PipelineConfig(p_d=p_d, p_a=p_a, include_raw=spec.include_raw)
            t0 = time.perf_counter()
            try:
                result = run_method(method, g, cfg, truth)
                error = None
            except Exception as e:
                result, error = None, e
            elapsed = time.perf_counter() - t0 if spec.record_wall_time else 0.0

            for sel in sels:
                row = _row(spec, value, instance, seed, method, sel, p_d, p_a)
                row["wall_time"] = elapsed
                if error is not None:
                    row.update(status="failed", error=f"{type(error).__name__}: {error}")
                    log.error("%s %.3g #%d %s failed: %s", spec.family, value, instance, method, error)
                else:
                    stage_id = (
                        result.chosen_stage if sel == "none"
                        else select_stage(result.stages, sel, result.competing)
                    )
                    rec = result.stage(stage_id)
                    row.update(nmi=rec.nmi, q=rec.q, chosen_stage=stage_id,
                               communities=rec.partition.community_count)
                rows.append(row)
    log.info("%s %.3g #%d done (%d rows)", spec.family, value, instance, len(rows))
    return rows


def _run_cell_args(args: tuple) -> list[dict]:
    return run_cell(*args)


def sort_rows(df: pd.DataFrame) -> pd.DataFrame:
    keys = ["sweep_value", "method", "selection", "p_d", "p_a", "instance"]
    return df.sort_values(keys, kind="mergesort").reset_index(drop=True)[ROW_COLUMNS]


def run_experiment(spec: ExperimentSpec) -> pd.DataFrame:
    """All result rows for `spec`, sorted so execution order never shows in the output."""
    cells = [(spec, v, i) for v in spec.sweep for i in range(spec.instances)]
    log.info("experiment %s: %d cells, %d workers", spec.family, len(cells), spec.workers)

    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            chunks = list(pool.map(_run_cell_args, cells))
    else:
        chunks = [run_cell(*c) for c in cells]

    rows = [r for chunk in chunks for r in chunk]
    return sort_rows(pd.DataFrame(rows, columns=ROW_COLUMNS))
