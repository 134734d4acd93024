"""Tests for settings loading."""

import os

import pytest

from cobhamkit.config import CobhamSettings, SearchConfig, load_settings, parse_settings
from cobhamkit.errors import ConfigError

CONFIG = os.path.join(os.path.dirname(__file__), "config")


def test_defaults():
    settings = CobhamSettings()
    assert settings.search == SearchConfig()
    assert settings.search.witness_cap == 1_000_000
    assert settings.search.sanity_bound == 10_000
    assert settings.verify_window == 1000
    assert settings.seed == 0
    assert settings.log_level == "WARNING"


def test_load_shipped_yaml():
    settings = load_settings(os.path.join(CONFIG, "search_settings.yaml"))
    assert settings == CobhamSettings()


def test_load_example_json():
    settings = load_settings(os.path.join(CONFIG, "example_settings.json"))
    assert settings.search.witness_cap == 200_000
    assert settings.search.chain_links == 6
    assert settings.verify_samples == 250
    assert settings.log_level == "INFO"


def test_partial_document_keeps_defaults():
    settings = parse_settings({"search": {"witness_cap": 10}, "log_level": "debug"})
    assert settings.search.witness_cap == 10
    assert settings.search.approx_iteration_cap == 1_000_000
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("document", [
    {"search": {"witness_cap": 0}},
    {"verify_window": -1},
    {"log_level": "LOUD"},
])
def test_invalid_settings(document):
    with pytest.raises(ConfigError):
        parse_settings(document)


def test_missing_explicit_path(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(str(tmp_path / "absent.yaml"))


def test_unsupported_suffix(tmp_path):
    path = tmp_path / "settings.toml"
    path.write_text("seed = 1\n")
    with pytest.raises(ConfigError):
        load_settings(str(path))


def test_broken_yaml(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("search: [1\n")
    with pytest.raises(ConfigError):
        load_settings(str(path))
