import json
import logging
import os
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = "config/search_settings.yaml"


class SearchConfig(BaseModel):
    """Caps bounding every unbounded search in the extraction pipeline."""

    witness_cap: int = Field(default=1_000_000, gt=0)
    approx_iteration_cap: int = Field(default=1_000_000, gt=0)
    reverse_state_cap: int = Field(default=1_000_000, gt=0)
    sanity_bound: int = Field(default=10_000, gt=0)
    chain_links: int = Field(default=4, gt=0)


class CobhamSettings(BaseModel):
    search: SearchConfig = Field(default_factory=SearchConfig)
    verify_window: int = Field(default=1000, ge=0)
    verify_samples: int = Field(default=1000, ge=0)
    seed: int = 0
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return value


def parse_settings(document: Dict[str, Any]) -> CobhamSettings:
    try:
        return CobhamSettings.model_validate(document or {})
    except ValidationError as e:
        raise ConfigError(f"invalid settings: {e}") from None


def load_settings(config_path: Optional[str] = None) -> CobhamSettings:
    """
    Load settings from a YAML or JSON file.

    An explicit path must exist; without one, the default path is used when
    present and built-in defaults otherwise.
    """
    path = config_path or DEFAULT_SETTINGS_PATH
    if not os.path.exists(path):
        if config_path:
            raise ConfigError(f"settings file {config_path} does not exist")
        logger.debug("no settings file at %s, using defaults", path)
        return CobhamSettings()

    try:
        with open(path, "r", encoding="utf-8") as f:
            if path.endswith(".yaml") or path.endswith(".yml"):
                document = yaml.safe_load(f)
            elif path.endswith(".json"):
                document = json.load(f)
            else:
                raise ConfigError("settings file must be YAML or JSON")
    except (OSError, yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigError(f"error loading settings from {path}: {e}") from None

    return parse_settings(document)
