#!/usr/bin/env python3
from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np
import pandas as pd

from cdlp.experiments.report import read_csv

METHOD_ORDER = ["baseline1", "baseline2-cn", "cdlp"]


def _numeric(frame: pd.DataFrame) -> pd.DataFrame:
    """Every column as float; unparsable or infinite cells become NaN."""
    return frame.apply(pd.to_numeric, errors="coerce").astype(float).replace([np.inf, -np.inf], np.nan)


def build_figure_table(summary: pd.DataFrame, family: str, selection: str) -> pd.DataFrame:
    """
    One row per sweep value, columns <method>_nmi_mean / <method>_nmi_std.

    Baseline1 has no selection step, so its "none" rows are joined into every
    selection's table.
    """
    fam = summary[summary["family"] == family]
    # the main curves use the default (single) p_d/p_a setting per method
    fam = fam.sort_values(["p_d", "p_a"], kind="mergesort").drop_duplicates(
        ["sweep_value", "method", "selection"], keep="first"
    )
    picked = fam[(fam["selection"] == selection) | (fam["selection"] == "none")]

    out = pd.DataFrame({"sweep_value": sorted(picked["sweep_value"].unique())})
    for method in METHOD_ORDER:
        m = picked[picked["method"] == method][["sweep_value", "nmi_mean", "nmi_std"]]
        if m.empty:
            continue
        m = m.rename(columns={"nmi_mean": f"{method}_nmi_mean", "nmi_std": f"{method}_nmi_std"})
        out = out.merge(m, on="sweep_value", how="left")
    return _numeric(out)


def build_sensitivity_table(summary: pd.DataFrame, family: str, selection: str) -> pd.DataFrame:
    """p_d x p_a grid of mean NMI for the cdlp method."""
    grid = summary[(summary["family"] == family) & (summary["method"] == "cdlp")
                   & (summary["selection"] == selection)]
    if grid.empty:
        return pd.DataFrame()
    return grid.pivot_table(index="p_d", columns="p_a", values="nmi_mean", aggfunc="first").reset_index()


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--summary", default="runs/experiment/summary.csv")
    parser.add_argument("--out_dir", default=None, help="Defaults to the summary's directory.")
    args = parser.parse_args()

    summary_path = Path(args.summary)
    if not summary_path.exists():
        raise SystemExit(f"Summary not found: {summary_path}")
    out_dir = Path(args.out_dir) if args.out_dir else summary_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)

    summary = read_csv(str(summary_path))
    selections = [s for s in summary["selection"].unique() if s != "none"] or ["none"]
    for family in sorted(summary["family"].unique()):
        for selection in sorted(selections):
            table = build_figure_table(summary, family, selection)
            path = out_dir / f"figure_{family}_{selection}.csv"
            table.to_csv(path, index=False, float_format="%.6g")
            print(f"[ok] wrote {path} ({len(table)} rows)")

            grid = build_sensitivity_table(summary, family, selection)
            if len(grid) > 1:
                path = out_dir / f"sensitivity_{family}_{selection}.csv"
                grid.to_csv(path, index=False, float_format="%.6g")
                print(f"[ok] wrote {path}")


if __name__ == "__main__":
    main()
