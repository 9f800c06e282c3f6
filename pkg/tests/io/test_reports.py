import json
from pathlib import Path

import pytest
from ruamel.yaml import YAML

from gradual_sensitivity.enums import GuaranteeKind, Verdict
from gradual_sensitivity.errors import SettingsError
from gradual_sensitivity.io import reports
from gradual_sensitivity.models.results import (
    DPReport,
    FuzzReport,
    GGCounterexample,
    GGReport,
    MPReport,
    MPViolation,
)


def failing_mp_report() -> MPReport:
    report = MPReport("liar", trials=3, successes=2)
    report.violations.append(
        MPViolation({"x": ("1", "2")}, ("2", "4"), 2.0, 1.0, "distance exceeds bound")
    )
    return report


def test_document_shape():
    payload = reports.document("mp", [{"name": "a"}], seed=3)
    assert payload == {
        "schema_version": reports.SCHEMA_VERSION,
        "kind": "mp",
        "seed": 3,
        "results": [{"name": "a"}],
    }


def test_mp_report_serialisation():
    data = failing_mp_report().to_dict()
    assert data["mode"] == "mp"
    assert data["passed"] is False
    assert data["violations"][0]["inputs"] == {"x": ["1", "2"]}
    assert data["min_slack"] == "inf"


def test_mp_table_marks_failures():
    table = reports.mp_table([MPReport("ok", trials=1, successes=1), failing_mp_report()])
    lines = table.splitlines()
    assert lines[0].split() == ["program", "pairs", "ok", "errors", "ts-mismatch", "violations"]
    assert set(lines[1]) <= {"-", " "}
    assert lines[2].split()[-1] == "ok"
    assert lines[3].split()[-1] == "FAIL"


def test_violation_lines():
    (line,) = reports.violation_lines([failing_mp_report()])
    assert "liar: distance exceeds bound" in line
    assert "x=1/2" in line


def test_other_tables():
    gg = GGReport(GuaranteeKind.DYNAMIC, programs=2, widenings=4, checked=4)
    gg.counterexamples.append(GGCounterexample("x", "x :: Number[?r]", "worse"))
    assert reports.gg_table(gg).splitlines()[2].split()[0] == "dynamic"
    assert "FAIL" in reports.gg_table(gg)
    fuzz = FuzzReport("ctrans-associativity", trials=10, defined=6, undefined=4)
    assert reports.fuzz_table([fuzz]).splitlines()[2].split() == [
        "ctrans-associativity",
        "10",
        "6",
        "4",
        "0",
        "ok",
    ]
    dp = DPReport(
        eps=1.0,
        samples=4,
        edges=[0.0, 1.0, 2.0],
        counts_first=[3, 1],
        counts_second=[2, 2],
        verdict=Verdict.PASS,
    )
    text = reports.dp_table(dp)
    assert "pass" in text
    assert "1.000" in text


def test_write_json_and_yaml(tmp_path: Path):
    payload = reports.document("evidence", [FuzzReport("law", trials=1, defined=1).to_dict()])
    json_path = tmp_path / "out.json"
    reports.write_output(json_path, payload)
    assert json.loads(json_path.read_text(encoding="utf-8")) == payload

    yaml_path = tmp_path / "out.yaml"
    reports.write_output(yaml_path, payload)
    with yaml_path.open(encoding="utf-8") as handle:
        assert YAML(typ="safe").load(handle) == payload


def test_unwritable_output(tmp_path: Path):
    with pytest.raises(SettingsError, match="cannot write report"):
        reports.write_output(tmp_path / "missing" / "out.json", reports.document("mp", []))
