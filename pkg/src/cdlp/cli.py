from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional

from cdlp.benchmarks.gn import GnConfig
from cdlp.benchmarks.lfr import LfrConfig
from cdlp.config import defaults
from cdlp.config.experiment import PRESETS, load_experiment_spec, preset_spec
from cdlp.detect.fast_greedy import fast_greedy
from cdlp.errors import EXIT_OK, EXIT_PARTIAL, CdlpError, ConfigError, exit_code_for
from cdlp.experiments.report import summarize, write_results, write_run_meta, write_summary
from cdlp.experiments.runner import generate_benchmark, run_experiment
from cdlp.graph.io import read_communities, read_edge_list, write_communities, write_edge_list
from cdlp.pipeline.stages import PipelineConfig, PipelineResult, run_baseline2_cn, run_cdlp

log = logging.getLogger("cdlp")


def _default_out(graph_path: str, suffix: str) -> str:
    stem, _ = os.path.splitext(graph_path)
    return f"{stem}.{suffix}.communities"


def cmd_generate(args) -> int:
    if args.family == "gn":
        if args.z_out is None:
            raise ConfigError("--z-out is required for GN")
        cfg: GnConfig | LfrConfig = GnConfig(z_out=args.z_out)
    else:
        if args.mu is None:
            raise ConfigError("--mu is required for LFR")
        overrides = {k: v for k, v in dict(n=args.n, k_avg=args.k_avg, k_max=args.k_max,
                                            gamma=args.gamma, beta=args.beta).items() if v is not None}
        cfg = LfrConfig(mu=args.mu, **overrides)

    g, truth, meta = generate_benchmark(cfg, args.seed)
    edges_path = f"{args.out}.edges"
    comm_path = f"{args.out}.communities"
    meta_path = f"{args.out}.meta.json"
    write_edge_list(g, edges_path)
    write_communities(truth, comm_path)
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")

    print(f"N={g.node_count} M={g.edge_count} communities={truth.community_count} "
          f"realized_mu={meta['realized_mu']:.4f}")
    print("Saved:", edges_path, comm_path, meta_path)
    return EXIT_OK


def cmd_detect(args) -> int:
    g = read_edge_list(args.graph)
    res = fast_greedy(g)
    out = args.out or _default_out(args.graph, "fastgreedy")
    write_communities(res.partition, out)
    print(f"communities = {res.partition.community_count}")
    print(f"Q = {res.q:.6f}")
    print("Saved:", out)
    return EXIT_OK


def format_report(result: PipelineResult) -> list[str]:
    has_nmi = any(r.nmi is not None for r in result.stages)
    header = f"{'stage':<6}{'edges':>8}{'added':>8}{'removed':>9}{'k':>5}{'Q':>11}"
    if has_nmi:
        header += f"{'NMI':>9}"
    lines = [header]
    for r in result.stages:
        line = (f"{r.stage:<6}{r.edge_count:>8}{r.added:>8}{r.removed:>9}"
                f"{r.partition.community_count:>5}{r.q:>11.6f}")
        if has_nmi:
            line += f"{r.nmi:>9.4f}"
        if r.stage not in result.competing:
            line += "  (not competing)"
        if r.stage == result.chosen_stage:
            line += "  <- chosen"
        lines.append(line)
    return lines


def _report_json(result: PipelineResult, cfg: PipelineConfig) -> dict:
    return {
        "method": result.method,
        "p_d": cfg.p_d,
        "p_a": cfg.p_a,
        "include_raw": cfg.include_raw,
        "selection": cfg.selection.value,
        "chosen_stage": result.chosen_stage,
        "stages": [
            {"stage": r.stage, "edges": r.edge_count, "added": r.added, "removed": r.removed,
             "communities": r.partition.community_count, "q": r.q, "nmi": r.nmi}
            for r in result.stages
        ],
    }


def _cmd_staged(args, runner, suffix: str) -> int:
    g = read_edge_list(args.graph)
    truth = read_communities(args.truth, g.node_count) if args.truth else None
    cfg = PipelineConfig(p_d=args.p_d, p_a=args.p_a, include_raw=args.include_raw, selection=args.selection)
    result = runner(g, cfg, truth)

    out = args.out or _default_out(args.graph, suffix)
    write_communities(result.chosen_partition, out)
    for line in format_report(result):
        print(line)
    print(f"chosen = {result.chosen_stage}")
    print(f"communities = {result.chosen_partition.community_count}")
    print(f"Q = {result.q:.6f}")
    if args.report:
        os.makedirs(os.path.dirname(args.report) or ".", exist_ok=True)
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump(_report_json(result, cfg), f, indent=2)
        print("Saved:", args.report)
    print("Saved:", out)
    return EXIT_OK


def cmd_cdlp(args) -> int:
    return _cmd_staged(args, run_cdlp, "cdlp")


def cmd_baseline2(args) -> int:
    return _cmd_staged(args, run_baseline2_cn, "baseline2")


def cmd_experiment(args) -> int:
    if args.preset:
        spec = preset_spec(args.preset, master_seed=args.seed if args.seed is not None else defaults.MASTER_SEED)
    elif args.spec:
        spec = load_experiment_spec(args.spec)
    else:
        raise ConfigError("give an experiment spec file or --preset")
    overrides = {}
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.seed is not None and not args.preset:
        overrides["master_seed"] = args.seed
    if args.instances is not None:
        overrides["instances"] = args.instances
    if overrides:
        spec = type(spec)(**{**spec.to_dict(), **overrides})

    rows = run_experiment(spec)
    summary = summarize(rows)
    results_path = os.path.join(args.out, "results.csv")
    summary_path = os.path.join(args.out, "summary.csv")
    write_results(rows, results_path)
    write_summary(summary, summary_path)
    meta = write_run_meta(spec.to_dict(), rows, os.path.join(args.out, "run_meta.json"))

    print(f"rows={meta['rows']} failed={meta['failed_rows']} summary_rows={len(summary)}")
    print("Saved:", results_path, summary_path)
    if meta["failed_rows"]:
        log.warning("%d of %d runs failed; see the error column in %s",
                    meta["failed_rows"], meta["rows"], results_path)
        return EXIT_PARTIAL
    return EXIT_OK


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", help="Edge-list file.")
    p.add_argument("--p-d", type=float, default=defaults.DEFAULT_P_D, help="Fraction of edges removed per D stage.")
    p.add_argument("--p-a", type=float, default=defaults.DEFAULT_P_A, help="Fraction of edges added at the A stage.")
    p.add_argument("--include-raw", action="store_true", help="Let the unmodified graph compete in selection.")
    p.add_argument("--selection", choices=["modularity", "nmi"], default="modularity")
    p.add_argument("--truth", default=None, help="Ground-truth community file (enables NMI).")
    p.add_argument("--out", default=None, help="Output community file.")
    p.add_argument("--report", default=None, help="Optional JSON stage report path.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdlp", description="Community detection with link prediction.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="Generate a GN or LFR benchmark graph.")
    g.add_argument("--family", choices=["gn", "lfr"], required=True)
    g.add_argument("--z-out", type=float, default=None)
    g.add_argument("--mu", type=float, default=None)
    g.add_argument("--n", type=int, default=None, help="LFR node count.")
    g.add_argument("--k-avg", type=float, default=None)
    g.add_argument("--k-max", type=int, default=None)
    g.add_argument("--gamma", type=float, default=None)
    g.add_argument("--beta", type=float, default=None)
    g.add_argument("--seed", type=int, default=defaults.MASTER_SEED)
    g.add_argument("--out", required=True, help="Output prefix: writes .edges, .communities, .meta.json")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("detect", help="Fast-greedy modularity optimization.")
    d.add_argument("graph")
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_detect)

    c = sub.add_parser(
        "cdlp",
        help="Remove/add/remove link-prediction pipeline (D, A, D indices).",
        description="D stages only remove edges between detected communities; a large --p-d "
                    "removes at most the cross-community edges and never empties a stage.",
    )
    _add_pipeline_flags(c)
    c.set_defaults(func=cmd_cdlp)

    b = sub.add_parser("baseline2", help="Same staging ranked by common neighbours.")
    _add_pipeline_flags(b)
    b.set_defaults(func=cmd_baseline2)

    e = sub.add_parser("experiment", help="Run a benchmark sweep and write results/summary CSVs.")
    e.add_argument("spec", nargs="?", default=None, help="Experiment spec JSON.")
    e.add_argument("--preset", choices=PRESETS, default=None)
    e.add_argument("--seed", type=int, default=None, help="Override the master seed.")
    e.add_argument("--workers", type=int, default=None)
    e.add_argument("--instances", type=int, default=None)
    e.add_argument("--out", default="runs/experiment")
    e.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.func(args)
    except (CdlpError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    raise SystemExit(main())
