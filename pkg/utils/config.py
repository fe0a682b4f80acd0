"""
Configuration through environment variables.

Values come from the process environment, optionally seeded from a local ``.env``
file, so the same settings work for local runs, CI jobs and containers.
"""

import json
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from utils.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_FUEL = 64
DEFAULT_NODE_BUDGET = 10**6
DEFAULT_MAX_POOL = 8
DEFAULT_TOWER_LIMIT = 10**5
OUTPUT_FORMATS = ("sexpr", "json")


def _default_corpus_path() -> Path:
    return Path(__file__).parent.parent / "data" / "seed_corpus.sexpr"


def get_secret(key: str, default: Any = None, nested_key: Optional[str] = None) -> Any:
    """
    Get a setting from environment variables.

    Args:
        key: The environment variable key to retrieve
        default: Default value if the variable is not set
        nested_key: Optional key into a JSON object value

    Returns:
        The value (parsed when it looks like JSON), or default if not found

    Examples:
        >>> get_secret("ctw.fuel", 64)
        64
    """
    env_key = key.upper().replace(".", "_")
    env_value = os.getenv(env_key)

    if env_value:
        if env_value.strip().startswith(("{", "[")):
            try:
                parsed = json.loads(env_value)
                if nested_key and isinstance(parsed, dict):
                    return parsed.get(nested_key, default)
                return parsed
            except json.JSONDecodeError:
                pass
        return env_value

    return default


def _as_int(key: str, value: Any) -> int:
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from e


@dataclass(frozen=True)
class Config:
    """Run settings shared by the CLI and the check suites."""

    fuel: int = DEFAULT_FUEL
    node_budget: int = DEFAULT_NODE_BUDGET
    seed_corpus_path: Path = _default_corpus_path()
    output_format: Optional[str] = None
    max_pool: int = DEFAULT_MAX_POOL
    tower_limit: int = DEFAULT_TOWER_LIMIT

    def validate(self) -> "Config":
        if self.fuel < 1:
            raise ConfigError(f"fuel must be >= 1, got {self.fuel}")
        if self.node_budget < 10**3:
            raise ConfigError(f"node budget must be >= 1000, got {self.node_budget}")
        if self.output_format is not None and self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")
        if self.max_pool < 1:
            raise ConfigError(f"max pool must be >= 1, got {self.max_pool}")
        return self


def load_config(env_file: Optional[str] = None, **overrides: Any) -> Config:
    """
    Build a Config from the environment, then apply explicit overrides.

    Args:
        env_file: Optional path to a .env file (default: search from the cwd)
        **overrides: Field values that win over the environment; None is ignored

    Returns:
        A validated Config
    """
    load_dotenv(env_file)

    config = Config(
        fuel=_as_int("CTW_FUEL", get_secret("CTW_FUEL", DEFAULT_FUEL)),
        node_budget=_as_int("CTW_NODE_BUDGET", get_secret("CTW_NODE_BUDGET", DEFAULT_NODE_BUDGET)),
        seed_corpus_path=Path(get_secret("CTW_SEED_CORPUS", _default_corpus_path())),
        output_format=get_secret("CTW_FORMAT"),
        max_pool=_as_int("CTW_MAX_POOL", get_secret("CTW_MAX_POOL", DEFAULT_MAX_POOL)),
    )

    explicit = {key: value for key, value in overrides.items() if value is not None}
    if "seed_corpus_path" in explicit:
        explicit["seed_corpus_path"] = Path(explicit["seed_corpus_path"])
    config = replace(config, **explicit)

    logger.debug(f"Configuration: {config}")
    return config.validate()
