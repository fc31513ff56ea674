from __future__ import annotations

import importlib.util
import json
from pathlib import Path

import pytest

from cdlp.cli import main
from cdlp.errors import EXIT_CONTRACT, EXIT_INPUT, EXIT_OK, EXIT_PARTIAL
from cdlp.experiments import runner
from cdlp.experiments.report import read_csv
from cdlp.graph.io import read_communities

BRIDGED = "# nodes: 6\n0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n"
SMALL_SPEC = {
    "family": "gn",
    "sweep": [2.0, 6.0],
    "instances": 2,
    "selections": ["modularity", "nmi"],
    "record_wall_time": False,
}


@pytest.fixture
def bridged_file(tmp_path) -> str:
    path = tmp_path / "bridged.edges"
    path.write_text(BRIDGED, encoding="utf-8")
    return str(path)


def test_detect(bridged_file, tmp_path, capsys):
    out = str(tmp_path / "found.communities")
    assert main(["detect", bridged_file, "--out", out]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "communities = 2" in printed
    assert read_communities(out, 6).assignment == (0, 0, 0, 1, 1, 1)


def test_detect_default_output_path(bridged_file, tmp_path):
    assert main(["detect", bridged_file]) == EXIT_OK
    assert (tmp_path / "bridged.fastgreedy.communities").exists()


def test_detect_two_triangles_q(tmp_path, capsys):
    path = tmp_path / "tt.edges"
    path.write_text("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n", encoding="utf-8")
    assert main(["detect", str(path)]) == EXIT_OK
    assert "Q = 0.500000" in capsys.readouterr().out


@pytest.mark.parametrize("text", ["", "0 1\n1 oops\n"])
def test_detect_bad_input(tmp_path, capsys, text):
    path = tmp_path / "bad.edges"
    path.write_text(text, encoding="utf-8")
    assert main(["detect", str(path)]) == EXIT_INPUT
    assert "error:" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["detect", str(tmp_path / "nope.edges")]) == EXIT_INPUT


def test_cdlp_with_report(bridged_file, tmp_path, capsys):
    report = tmp_path / "report.json"
    code = main(["cdlp", bridged_file, "--p-d", "0.1", "--p-a", "0", "--report", str(report)])
    assert code == EXIT_OK
    printed = capsys.readouterr().out
    assert "chosen = G1" in printed
    assert "<- chosen" in printed

    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["chosen_stage"] == "G1"
    assert [s["stage"] for s in data["stages"]] == ["G", "G1", "G2", "G3"]
    assert data["stages"][1]["removed"] == 1


def test_cdlp_nmi_selection_without_truth(bridged_file):
    assert main(["cdlp", bridged_file, "--selection", "nmi"]) == EXIT_INPUT


def test_cdlp_nmi_selection_with_truth(bridged_file, tmp_path, capsys):
    truth = tmp_path / "truth.communities"
    truth.write_text("0 a\n1 a\n2 a\n3 b\n4 b\n5 b\n", encoding="utf-8")
    code = main(["cdlp", bridged_file, "--p-d", "0.1", "--selection", "nmi", "--truth", str(truth)])
    assert code == EXIT_OK
    assert "NMI" in capsys.readouterr().out


def test_degenerate_stage_exit_code(tmp_path, capsys):
    path = tmp_path / "path.edges"
    path.write_text("0 1\n1 2\n", encoding="utf-8")
    assert main(["baseline2", str(path), "--p-d", "0.9", "--p-a", "0"]) == EXIT_CONTRACT
    assert "G1" in capsys.readouterr().err


def test_cdlp_keeps_intra_edges_under_heavy_removal(tmp_path, capsys):
    # D only ranks cross-community edges; the single community found on a path leaves none
    path = tmp_path / "path.edges"
    path.write_text("0 1\n1 2\n", encoding="utf-8")
    report = tmp_path / "report.json"
    code = main(["cdlp", str(path), "--p-d", "0.99", "--p-a", "0", "--report", str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text(encoding="utf-8"))
    assert [s["edges"] for s in data["stages"]] == [2, 2, 2, 2]
    assert [s["removed"] for s in data["stages"]] == [0, 0, 0, 0]
    assert data["chosen_stage"] == "G1"
    assert "communities = 1" in capsys.readouterr().out


def test_generate_gn_is_reproducible(tmp_path, capsys):
    a, b = str(tmp_path / "a" / "gn"), str(tmp_path / "b" / "gn")
    for prefix in (a, b):
        Path(prefix).parent.mkdir()
        assert main(["generate", "--family", "gn", "--z-out", "3", "--seed", "5", "--out", prefix]) == EXIT_OK
    for suffix in (".edges", ".communities", ".meta.json"):
        assert Path(a + suffix).read_bytes() == Path(b + suffix).read_bytes()
    meta = json.loads(Path(a + ".meta.json").read_text(encoding="utf-8"))
    assert meta["family"] == "gn"
    assert meta["seed"] == 5
    assert meta["communities"] == 4


def test_generate_lfr(tmp_path):
    prefix = str(tmp_path / "lfr")
    code = main(["generate", "--family", "lfr", "--mu", "0.3", "--n", "200", "--k-avg", "10",
                 "--k-max", "20", "--seed", "1", "--out", prefix])
    assert code == EXIT_OK
    meta = json.loads(Path(prefix + ".meta.json").read_text(encoding="utf-8"))
    assert meta["config"]["n"] == 200
    assert abs(meta["realized_mu"] - 0.3) <= 0.05


def test_generate_needs_sweep_parameter(tmp_path):
    assert main(["generate", "--family", "gn", "--out", str(tmp_path / "x")]) == EXIT_INPUT
    assert main(["generate", "--family", "lfr", "--mu", "1.5", "--out", str(tmp_path / "x")]) == EXIT_INPUT


def _write_spec(tmp_path, spec: dict) -> str:
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec), encoding="utf-8")
    return str(path)


def test_experiment_writes_reproducible_outputs(tmp_path, capsys):
    spec = _write_spec(tmp_path, SMALL_SPEC)
    for run in ("r1", "r2"):
        assert main(["experiment", spec, "--out", str(tmp_path / run)]) == EXIT_OK
    for fname in ("results.csv", "summary.csv", "run_meta.json"):
        assert (tmp_path / "r1" / fname).read_bytes() == (tmp_path / "r2" / fname).read_bytes()
    assert len(read_csv(str(tmp_path / "r1" / "results.csv"))) == 2 * 2 * 5
    assert "failed=0" in capsys.readouterr().out


def test_experiment_partial_failure(tmp_path, monkeypatch):
    real = runner.run_method

    def flaky(method, g, cfg, truth=None):
        if method == "baseline2-cn":
            raise RuntimeError("boom")
        return real(method, g, cfg, truth)

    monkeypatch.setattr(runner, "run_method", flaky)
    spec = _write_spec(tmp_path, {**SMALL_SPEC, "sweep": [2.0], "instances": 1})
    assert main(["experiment", spec, "--out", str(tmp_path / "run")]) == EXIT_PARTIAL
    rows = read_csv(str(tmp_path / "run" / "results.csv"))
    assert set(rows.loc[rows["status"] == "failed", "method"]) == {"baseline2-cn"}


def test_experiment_config_errors(tmp_path):
    assert main(["experiment", "--out", str(tmp_path / "run")]) == EXIT_INPUT
    spec = _write_spec(tmp_path, {**SMALL_SPEC, "p_d": [2.0]})
    assert main(["experiment", spec, "--out", str(tmp_path / "run")]) == EXIT_INPUT


def _load_export_script():
    path = Path(__file__).resolve().parents[1] / "scripts" / "export_figure_tables.py"
    spec = importlib.util.spec_from_file_location("export_figure_tables", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_export_figure_tables(tmp_path):
    spec = _write_spec(tmp_path, {**SMALL_SPEC, "p_d": [0.05, 0.1]})
    assert main(["experiment", spec, "--out", str(tmp_path / "run")]) == EXIT_OK
    summary = read_csv(str(tmp_path / "run" / "summary.csv"))

    export = _load_export_script()
    table = export.build_figure_table(summary, "gn", "nmi")
    assert list(table["sweep_value"]) == [2.0, 6.0]
    assert {"baseline1_nmi_mean", "baseline2-cn_nmi_mean", "cdlp_nmi_mean"} <= set(table.columns)

    grid = export.build_sensitivity_table(summary, "gn", "modularity")
    assert sorted(grid["p_d"]) == [0.05, 0.1]


@pytest.mark.parametrize(
    "override",
    [
        {"sweep": ["abc"]},
        {"p_d": ["x"]},
        {"p_a": [None]},
        {"master_seed": "abc"},
        {"master_seed": -1},
        {"instances": True},
        {"instances": 2.5},
        {"workers": "2"},
        {"include_raw": "yes"},
        {"gn": {"avg_degree": "high"}},
        {"gn": {"n": 100}},
        {"gn": []},
    ],
)
def test_experiment_rejects_mistyped_spec_values(tmp_path, capsys, override):
    spec = _write_spec(tmp_path, {**SMALL_SPEC, **override})
    assert main(["experiment", spec, "--out", str(tmp_path / "run")]) == EXIT_INPUT
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "run").exists()


def test_undecodable_inputs_exit_with_input_error(tmp_path, capsys):
    graph = tmp_path / "bad.edges"
    graph.write_bytes(b"0 1\n1 \xff\n")
    assert main(["detect", str(graph)]) == EXIT_INPUT
    assert ":2:" in capsys.readouterr().err

    spec = tmp_path / "spec.json"
    spec.write_bytes(b'{\n  "family": "gn",\n  "sweep": ["\xff"]\n}\n')
    assert main(["experiment", str(spec), "--out", str(tmp_path / "run")]) == EXIT_INPUT
    assert ":3:" in capsys.readouterr().err
