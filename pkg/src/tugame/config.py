import os
import json
import logging
from fractions import Fraction
from typing import Any, Optional

VERSION = "1.2.0"

DEFAULT_MAX_N = 12
DEFAULT_VERTEX_CAP = 6
DEFAULT_STEARNS_TOL = Fraction(1, 10**9)
DEFAULT_STEARNS_MAX_STEPS = 100_000
DEFAULT_VERIFY_GAMES = 200
DEFAULT_VERIFY_PLAYERS = (3, 4, 5)
DEFAULT_WORKERS = 4

DEFAULT_VERIFY_OUTPUT = "tugame_verify.txt"

MAX_N_ENV = "TUGAME_MAX_N"

# Keys accepted by `tugame config --set`.
SETTING_TYPES = {
    "max_n": int,
    "workers": int,
    "vertex_cap": int,
    "stearns_max_steps": int,
}

CONFIG_FILE = os.path.expanduser("~/.config/tugame/config.json")

log = logging.getLogger(__name__)


def load_config() -> dict:
    if os.path.exists(CONFIG_FILE):
        try:
            with open(CONFIG_FILE, "r", encoding="utf-8") as f:
                return json.load(f)
        except Exception:
            pass
    return {}


def save_config(config: dict) -> None:
    os.makedirs(os.path.dirname(CONFIG_FILE), exist_ok=True)
    with open(CONFIG_FILE, "w", encoding="utf-8") as f:
        json.dump(config, f, indent=4)


def get_setting(key: str, default: Any = None) -> Any:
    return load_config().get(key, default)


def set_setting(key: str, raw: str) -> Any:
    """Validate and persist one setting. Returns the stored value."""
    if key not in SETTING_TYPES:
        raise KeyError(key)
    value = SETTING_TYPES[key](raw)
    if value < 1:
        raise ValueError(f"{key} must be positive")
    config = load_config()
    config[key] = value
    save_config(config)
    return value


def get_max_n() -> int:
    """Player cap for exponential scans: env var, then config file, then default."""
    raw = os.environ.get(MAX_N_ENV)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value >= 2:
            return value
        log.warning("ignoring %s=%r (expected an integer >= 2)", MAX_N_ENV, raw)
    value = get_setting("max_n")
    if isinstance(value, int) and value >= 2:
        return value
    return DEFAULT_MAX_N


def get_workers() -> int:
    value = get_setting("workers")
    return value if isinstance(value, int) and value >= 1 else DEFAULT_WORKERS


def get_vertex_cap() -> int:
    value = get_setting("vertex_cap")
    return value if isinstance(value, int) and value >= 2 else DEFAULT_VERTEX_CAP


def get_stearns_max_steps() -> int:
    value = get_setting("stearns_max_steps")
    return value if isinstance(value, int) and value >= 1 else DEFAULT_STEARNS_MAX_STEPS


def effective_settings() -> dict:
    return {
        "config_file": CONFIG_FILE,
        "max_n": get_max_n(),
        "max_n_source": describe_max_n_source() or "default",
        "workers": get_workers(),
        "vertex_cap": get_vertex_cap(),
        "stearns_max_steps": get_stearns_max_steps(),
    }


def describe_max_n_source() -> Optional[str]:
    if os.environ.get(MAX_N_ENV) is not None:
        return "environment"
    if "max_n" in load_config():
        return "config"
    return None
