import json

import pytest

from tugame import config


def test_defaults():
    assert config.get_max_n() == config.DEFAULT_MAX_N
    assert config.get_workers() == config.DEFAULT_WORKERS
    assert config.get_vertex_cap() == config.DEFAULT_VERTEX_CAP
    assert config.effective_settings()["max_n_source"] == "default"


def test_set_setting_persists():
    assert config.set_setting("workers", "2") == 2
    assert config.get_workers() == 2
    with open(config.CONFIG_FILE, encoding="utf-8") as f:
        assert json.load(f) == {"workers": 2}


def test_set_setting_validation():
    with pytest.raises(KeyError):
        config.set_setting("colour", "blue")
    with pytest.raises(ValueError):
        config.set_setting("max_n", "zero")
    with pytest.raises(ValueError):
        config.set_setting("max_n", "0")


def test_max_n_precedence(monkeypatch):
    config.set_setting("max_n", "8")
    assert config.get_max_n() == 8
    assert config.describe_max_n_source() == "config"
    monkeypatch.setenv(config.MAX_N_ENV, "5")
    assert config.get_max_n() == 5
    assert config.describe_max_n_source() == "environment"


def test_bad_environment_value_is_ignored(monkeypatch, caplog):
    monkeypatch.setenv(config.MAX_N_ENV, "lots")
    assert config.get_max_n() == config.DEFAULT_MAX_N
    assert "ignoring" in caplog.text


def test_unreadable_config_file_reads_as_empty():
    import os
    os.makedirs(os.path.dirname(config.CONFIG_FILE), exist_ok=True)
    with open(config.CONFIG_FILE, "w", encoding="utf-8") as f:
        f.write("{not json")
    assert config.load_config() == {}
