from pathlib import Path

import pytest
from pydantic import ValidationError

from gradual_sensitivity.errors import SettingsError
from gradual_sensitivity.io.settings import (
    DEFAULT_SEED,
    GsensSettings,
    environment_overrides,
    load_settings,
)


def write_config(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "gsens.yaml"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults(tmp_path: Path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    settings = load_settings(environ={})
    assert settings == GsensSettings()
    assert settings.seed == DEFAULT_SEED
    assert settings.value_range == (-10.0, 10.0)
    assert settings.workers == 1


def test_working_directory_file_is_picked_up(tmp_path: Path, monkeypatch):
    write_config(tmp_path, "seed: 5\nmp_pairs: 20\n")
    monkeypatch.chdir(tmp_path)
    settings = load_settings(environ={})
    assert settings.seed == 5
    assert settings.mp_pairs == 20


def test_environment_beats_file(tmp_path: Path):
    path = write_config(tmp_path, "seed: 5\nworkers: 2\n")
    settings = load_settings(path, environ={"GSENS_SEED": "9", "GSENS_VALUE_RANGE": "-1, 1"})
    assert settings.seed == 9
    assert settings.workers == 2
    assert settings.value_range == (-1.0, 1.0)


def test_environment_overrides_only_read_known_fields():
    found = environment_overrides({"GSENS_DP_TAU": "0.2", "GSENS_COLOUR": "red", "SEED": "1"})
    assert found == {"dp_tau": "0.2"}


def test_command_line_override_wins(tmp_path: Path):
    settings = load_settings(write_config(tmp_path, "seed: 5\n"), environ={})
    assert settings.override(seed=None, workers=None) is settings
    assert settings.override(seed=7).seed == 7


def test_unknown_keys_are_reported(tmp_path: Path):
    path = write_config(tmp_path, "seed: 1\npairs: 3\n")
    with pytest.raises(SettingsError, match="Unknown keys in .*: pairs") as info:
        load_settings(path, environ={})
    assert "mp_pairs" in info.value.suggestion


@pytest.mark.parametrize(
    "text", ["step_budget: 0\n", "value_range: [3, 1]\n", "dp_tau: -0.1\n", "seed: many\n"]
)
def test_invalid_values(tmp_path: Path, text):
    with pytest.raises(SettingsError, match="Invalid settings"):
        load_settings(write_config(tmp_path, text), environ={})


def test_invalid_override():
    with pytest.raises(SettingsError, match="command line"):
        GsensSettings().override(workers=0)


def test_settings_are_frozen():
    with pytest.raises(ValidationError):
        GsensSettings().seed = 3  # type: ignore[misc]
