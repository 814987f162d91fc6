"""CLI surface: commands, outputs on disk, and exit codes."""

import json
import os

import pytest
from click.testing import CliRunner

from aga.cli import EXIT_CONFIG_ERROR, main


@pytest.fixture
def runner():
    return CliRunner()


def test_run_prints_report_json(runner, town3_path):
    result = runner.invoke(main, ["run", "--scenario", town3_path, "--seed", "42"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["scenario"] == "town3"


def test_run_writes_report_file(runner, town3_path, tmp_path):
    out = str(tmp_path / "report.json")
    result = runner.invoke(main, ["run", "--scenario", town3_path, "--report", out])
    assert result.exit_code == 0
    assert json.load(open(out))["seed"] == 0


def test_run_toggle_flags_reach_report(runner, town3_path):
    result = runner.invoke(main, ["run", "--scenario", town3_path,
                                  "--no-lifestyle-policy", "--no-social-memory",
                                  "--mind-wandering"])
    data = json.loads(result.output)
    assert data["toggles"] == {"lifestyle_policy": False, "social_memory": False,
                               "mind_wandering": True}


def test_run_persists_policy_store(runner, town3_path, tmp_path):
    store = str(tmp_path / "store.jsonl")
    result = runner.invoke(main, ["run", "--scenario", town3_path,
                                  "--policy-store", store])
    assert result.exit_code == 0
    assert os.path.getsize(store) > 0


def test_run_missing_scenario_exits_2(runner, tmp_path):
    result = runner.invoke(main, ["run", "--scenario", str(tmp_path / "no.json")])
    assert result.exit_code == EXIT_CONFIG_ERROR


def test_run_bad_days_exits_2(runner, town3_path):
    result = runner.invoke(main, ["run", "--scenario", town3_path, "--days", "0"])
    assert result.exit_code == EXIT_CONFIG_ERROR


def test_http_backend_without_endpoint_exits_3(runner, town3_path, monkeypatch):
    monkeypatch.delenv("AGA_LLM_URL", raising=False)
    result = runner.invoke(main, ["run", "--scenario", town3_path,
                                  "--backend", "http"])
    assert result.exit_code == 3


def test_ablate_writes_csv_and_figure(runner, town3_path, tmp_path):
    out = str(tmp_path / "ablation.csv")
    result = runner.invoke(main, ["ablate", "--scenario", town3_path,
                                  "--days", "1", "--out", out])
    assert result.exit_code == 0
    assert os.path.getsize(out) > 0
    assert os.path.getsize(out[:-4] + ".png") > 0
    assert "baseline" in result.output and "full" in result.output


def test_export_relmap(runner, town3_path, tmp_path):
    report = str(tmp_path / "report.json")
    runner.invoke(main, ["run", "--scenario", town3_path, "--report", report])
    out = str(tmp_path / "relmap.csv")
    result = runner.invoke(main, ["export-relmap", "--report", report, "--out", out])
    assert result.exit_code == 0
    header = open(out).readline().strip()
    assert header == ",KM,ML,IR"
    assert os.path.getsize(out[:-4] + ".png") > 0


def test_export_activity(runner, town3_path, tmp_path):
    out = str(tmp_path / "activity.csv")
    result = runner.invoke(main, ["export-activity", "--scenario", town3_path,
                                  "--runs", "2", "--out", out])
    assert result.exit_code == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "run,IR,KM,ML"
    assert len(lines) == 3
    assert os.path.getsize(out[:-4] + ".png") > 0


def test_export_activity_rejects_http_backend(runner, town3_path, tmp_path):
    result = runner.invoke(main, ["export-activity", "--scenario", town3_path,
                                  "--backend", "http",
                                  "--out", str(tmp_path / "a.csv")])
    assert result.exit_code == EXIT_CONFIG_ERROR


def test_eval_prompts_activity_and_dialogue(runner, town3_path, tmp_path):
    report = str(tmp_path / "report.json")
    runner.invoke(main, ["run", "--scenario", town3_path, "--report", report])
    out_dir = str(tmp_path / "prompts")
    for kind in ("activity", "dialogue"):
        result = runner.invoke(main, ["eval-prompts", "--report", report,
                                      "--kind", kind, "--out", out_dir])
        assert result.exit_code == 0
    files = sorted(os.listdir(out_dir))
    assert "activity_KM.txt" in files
    assert any(name.startswith("dialogue_cafe_study") for name in files)
    body = open(os.path.join(out_dir, "activity_KM.txt")).read()
    assert "Please rate on a scale of 1 to 5" in body


def test_help_lists_all_commands(runner):
    result = runner.invoke(main, ["--help"])
    for command in ("run", "ablate", "export-relmap", "export-activity",
                    "eval-prompts"):
        assert command in result.output
