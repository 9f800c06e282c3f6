from pathlib import Path

import pytest

from gradual_sensitivity.errors import HarnessError, SettingsError
from gradual_sensitivity.io.loader import SpecLoader, read_program, read_yaml_mapping


def program_cfg(**overrides):
    base = {
        "name": "double",
        "source": "x + x",
        "env": {"x": "Number[r]"},
    }
    base.update(overrides)
    return base


def test_loader_builds_specs():
    specs = SpecLoader({"programs": [program_cfg(delta=2, claimed="2r")]}).build_specs()
    (spec,) = specs
    assert spec.name == "double"
    assert spec.delta == "2"
    assert spec.claimed == "2r"
    assert not spec.bounded


def test_loader_turns_range_lists_into_pairs():
    (spec,) = SpecLoader({"programs": [program_cfg(ranges={"x": [-1, 1]})]}).build_specs()
    assert spec.ranges == {"x": (-1.0, 1.0)}


def test_loader_rejects_unknown_keys():
    with pytest.raises(HarnessError, match="Unknown keys in double: weight") as info:
        SpecLoader({"programs": [program_cfg(weight=1)]}).build_specs()
    assert "source" in info.value.suggestion
    with pytest.raises(HarnessError, match="Unknown keys in specification: extra"):
        SpecLoader({"programs": [], "extra": True}).build_specs()


def test_loader_rejects_duplicate_names():
    with pytest.raises(HarnessError, match="duplicate program names: double"):
        SpecLoader({"programs": [program_cfg(), program_cfg()]}).build_specs()


@pytest.mark.parametrize(
    "raw, message",
    [
        ({"programs": {"name": "x"}}, "must be a list"),
        ({"programs": ["x + 1"]}, "must be a mapping"),
        ({"programs": [program_cfg(source="")]}, "invalid program double"),
    ],
)
def test_loader_rejects_malformed_entries(raw, message):
    with pytest.raises(HarnessError, match=message):
        SpecLoader(raw).build_specs()


def test_loader_from_string():
    payload = "programs:\n  - name: one\n    source: '1'\n"
    (spec,) = SpecLoader.from_string(payload).build_specs()
    assert spec.source == "1"
    with pytest.raises(HarnessError, match="mapping"):
        SpecLoader.from_string("- 1\n- 2\n")
    with pytest.raises(HarnessError, match="not valid YAML"):
        SpecLoader.from_string("programs: [\n")


def test_program_file_becomes_single_spec(corpus_dir):
    (spec,) = SpecLoader.from_path(corpus_dir / "scale_two.gsoul").build_specs()
    assert spec.name == "scale_two"
    assert spec.env == {}
    assert "scale(2, r)" in spec.source


def test_corpus_files_load(corpus_dir):
    specs = SpecLoader.from_path(corpus_dir / "mp_corpus.yaml").build_specs()
    assert len(specs) == len({spec.name for spec in specs})
    assert any(spec.fixed for spec in specs)


def test_missing_files_are_settings_errors(tmp_path: Path):
    with pytest.raises(SettingsError, match="cannot read"):
        read_yaml_mapping(tmp_path / "missing.yaml", context="specification")
    with pytest.raises(SettingsError, match="cannot read program"):
        read_program(tmp_path / "missing.gsoul")


def test_non_mapping_yaml_is_rejected(tmp_path: Path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n", encoding="utf-8")
    with pytest.raises(SettingsError, match="must hold a mapping"):
        read_yaml_mapping(path, context="settings")
    assert read_yaml_mapping(_empty(tmp_path), context="settings") == {}


def _empty(tmp_path: Path) -> Path:
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    return path
