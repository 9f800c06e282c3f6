import json
import os
import sys

import pytest
from typer.testing import CliRunner

from gradual_sensitivity.cli import app as cli_app
from gradual_sensitivity.cli.app import app

runner = CliRunner()

TABLE = {
    ("3r", "f"): 1,
    ("3r", "g"): 1,
    ("3r", "h"): 0,
    ("unknown", "f"): 2,
    ("unknown", "g"): 0,
    ("unknown", "h"): 0,
    ("0_3r", "f"): 2,
    ("0_3r", "g"): 0,
    ("0_3r", "h"): 0,
    ("1_3r", "f"): 1,
    ("1_3r", "g"): 0,
    ("1_3r", "h"): 0,
}


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for key in [name for name in os.environ if name.startswith("GSENS_")]:
        monkeypatch.delenv(key)


def invoke(*args):
    return runner.invoke(app, [str(arg) for arg in args])


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


@pytest.mark.parametrize("annotation, function", sorted(TABLE))
def test_list_annotation_table(corpus_dir, annotation, function):
    path = corpus_dir / "table" / f"l_{annotation}_apply_{function}.gsoul"
    result = invoke("run", path)
    assert result.exit_code == TABLE[(annotation, function)], result.output


def test_run_prints_value_type_and_monitored_effect(corpus_dir):
    result = invoke("run", corpus_dir / "scale_two.gsoul")
    assert result.exit_code == 0
    assert result.stdout.strip() == "6 : Number[?r]  (monitored: 2r)"


def test_scale_bounds(corpus_dir):
    assert invoke("run", corpus_dir / "scale_10.gsoul").exit_code == 0
    assert invoke("run", corpus_dir / "scale_11.gsoul").exit_code == 2


def test_run_json_reports_violation(corpus_dir):
    result = invoke("run", corpus_dir / "delayed_refutation.gsoul", "--json")
    assert result.exit_code == 2
    document = json.loads(result.stdout)
    assert document["value"] is None
    (entry,) = document["diagnostics"]
    assert entry["code"] == "SensitivityViolation"
    assert len(entry["evidence"]) == 2


def test_run_json_success(corpus_dir):
    document = json.loads(invoke("run", corpus_dir / "scale_two.gsoul", "--json").stdout)
    assert document["value"] == "6"
    assert document["type"] == "Number[?r]"
    assert document["monitored_effect"] == "2r"
    assert document["diagnostics"] == []


def test_run_trace(tmp_path):
    result = invoke("run", write(tmp_path, "sum.gsoul", "1 + 2"), "--trace")
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert any(" r-op " in line for line in lines[:-1])
    assert lines[-1] == "3 : Number  (monitored: ∅)"


def test_step_budget(tmp_path):
    source = "let loop = fix (f: Number -> Number) => fn (n: Number) => f(n); loop(1)"
    result = invoke("run", write(tmp_path, "loop.gsoul", source), "--step-budget", 50)
    assert result.exit_code == 3


def test_runtime_errors_exit_with_three(tmp_path):
    assert invoke("run", write(tmp_path, "div.gsoul", "1 / 0")).exit_code == 3


def test_check_prints_type(corpus_dir):
    result = invoke("check", corpus_dir / "glm.gsoul")
    assert result.exit_code == 0
    assert result.stdout.strip() == "Number"


@pytest.mark.parametrize(
    "source, code",
    [("true + 1", 1), ("let x = ;", 4), ("1 $ 2", 4)],
)
def test_check_error_codes(tmp_path, source, code):
    path = write(tmp_path, "bad.gsoul", source)
    assert invoke("check", path).exit_code == code
    result = invoke("check", path, "--json")
    assert result.exit_code == code
    (entry,) = json.loads(result.stdout)["diagnostics"]
    assert entry["severity"] == "error"
    assert entry["line"] == 1


def test_missing_program_is_an_input_error(tmp_path):
    assert invoke("check", tmp_path / "nope.gsoul").exit_code == 5


def test_mp_command(corpus_dir):
    result = invoke("test", "mp", corpus_dir / "x_plus_2y.yaml", "--pairs", 20)
    assert result.exit_code == 0
    assert "x_plus_2y" in result.stdout


def test_mp_command_json_and_output(corpus_dir, tmp_path):
    output = tmp_path / "mp.json"
    result = invoke(
        "test", "mp", corpus_dir / "x_plus_2y.yaml", "--pairs", 10, "--json", "-o", output
    )
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["kind"] == "mp"
    assert document["results"][0]["trials"] == 10
    assert json.loads(output.read_text(encoding="utf-8")) == document


def test_mp_command_delta_override(corpus_dir):
    result = invoke(
        "test", "mp", corpus_dir / "x_plus_2y.yaml", "--pairs", 5, "--delta", "3r", "--json"
    )
    assert result.exit_code == 0
    assert json.loads(result.stdout)["results"][0]["passed"] is True


def test_ts_refuses_unbounded_specs(corpus_dir):
    assert invoke("test", "mp", corpus_dir / "ts_unbounded.yaml", "--pairs", 5).exit_code == 0
    result = invoke("test", "mp", corpus_dir / "ts_unbounded.yaml", "--pairs", 5, "--ts")
    assert result.exit_code == 5


def test_gg_command(corpus_dir):
    result = invoke(
        "test", "gg", corpus_dir / "mp_corpus.yaml", "--widenings", 20, "--kind", "static"
    )
    assert result.exit_code == 0
    assert "static" in result.stdout


def test_evidence_command():
    result = invoke("test", "evidence", "--trials", 50, "--law", "interior-soundness", "--json")
    assert result.exit_code == 0
    (entry,) = json.loads(result.stdout)["results"]
    assert entry["law"] == "interior-soundness"
    assert invoke("test", "evidence", "--law", "nonsense").exit_code == 5


def test_dp_glm_command():
    result = invoke("dp", "glm", "--query", "v", "--db", 3, "--runs", 2, "--seed", 1)
    assert result.exit_code == 0
    assert len(result.stdout.strip().splitlines()) == 2
    assert invoke("dp", "glm", "--query", "v + v", "--db", 3).exit_code == 2


def test_dp_gat_command():
    result = invoke(
        "dp", "gat", "-q", "v", "-q", "v + v + v", "-q", "v", "--db", 5, "--thr", 2, "--runs", 3
    )
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "skipped: 1"
    assert all(line in {"-1", "0", "2"} for line in lines[1:])


def test_dp_verify_command():
    result = invoke(
        "dp", "verify", "-q", "v", "--db1", 0, "--db2", 0.5, "--samples", 20000, "--json"
    )
    assert result.exit_code == 0
    (entry,) = json.loads(result.stdout)["results"]
    assert entry["verdict"] == "pass"
    unknown = invoke("dp", "verify", "-q", "v", "--db1", 0, "--db2", 1, "--mechanism", "rr")
    assert unknown.exit_code == 3


def test_config_file(tmp_path, corpus_dir):
    config = write(tmp_path, "custom.yaml", "seed: 3\nworkers: 0\n")
    assert invoke("--config", config, "check", corpus_dir / "glm.gsoul").exit_code == 5


def test_no_command_prints_help():
    result = invoke()
    assert result.exit_code == 0
    assert "check" in result.stdout


def test_main_inserts_run_for_paths(monkeypatch):
    seen = []
    monkeypatch.setattr(cli_app, "app", lambda: seen.append(list(sys.argv)))
    monkeypatch.setattr(sys, "argv", ["gsens", "prog.gsoul"])
    cli_app.main()
    monkeypatch.setattr(sys, "argv", ["gsens", "check", "prog.gsoul"])
    cli_app.main()
    assert seen == [["gsens", "run", "prog.gsoul"], ["gsens", "check", "prog.gsoul"]]
