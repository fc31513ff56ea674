from __future__ import annotations

import json
import os

import pandas as pd

from cdlp.config import defaults
from cdlp.eval.aggregate import aggregate

SUMMARY_KEYS = ["family", "sweep_value", "method", "selection", "p_d", "p_a"]
SUMMARY_COLUMNS = SUMMARY_KEYS + ["n_ok", "n_failed", "nmi_mean", "nmi_std", "q_mean", "q_std"]


def summarize(rows: pd.DataFrame) -> pd.DataFrame:
    """Mean and sample std of NMI and Q per (family, sweep value, method, selection, p_d, p_a)."""
    out = []
    for key, grp in rows.groupby(SUMMARY_KEYS, sort=True):
        ok = grp[grp["status"] == "ok"]
        rec = dict(zip(SUMMARY_KEYS, key))
        rec["n_ok"] = int(len(ok))
        rec["n_failed"] = int(len(grp) - len(ok))
        if len(ok):
            nmi = aggregate(ok["nmi"].tolist())
            q = aggregate(ok["q"].tolist())
            rec.update(nmi_mean=nmi.mean, nmi_std=nmi.std, q_mean=q.mean, q_std=q.std)
        else:
            rec.update(nmi_mean=float("nan"), nmi_std=float("nan"), q_mean=float("nan"), q_std=float("nan"))
        out.append(rec)
    return pd.DataFrame(out, columns=SUMMARY_COLUMNS)


def _write_csv(df: pd.DataFrame, path: str, schema: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# schema: {schema}\n")
        df.to_csv(f, index=False, float_format=defaults.FLOAT_FORMAT, lineterminator="\n")


def write_results(rows: pd.DataFrame, path: str) -> None:
    _write_csv(rows, path, defaults.RESULTS_SCHEMA)


def write_summary(summary: pd.DataFrame, path: str) -> None:
    _write_csv(summary, path, defaults.SUMMARY_SCHEMA)


def read_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, skiprows=1)


def write_run_meta(spec_dict: dict, rows: pd.DataFrame, path: str) -> dict:
    meta = {
        "spec": spec_dict,
        "rng": defaults.RNG_ALGORITHM,
        "results_schema": defaults.RESULTS_SCHEMA,
        "summary_schema": defaults.SUMMARY_SCHEMA,
        "rows": int(len(rows)),
        "failed_rows": int((rows["status"] != "ok").sum()),
    }
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2)
    return meta
