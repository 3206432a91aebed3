"""Configuration file management for dsoracle.

Handles loading and saving the persistent CLI defaults (seed, epsilon, k, ...).
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)

# Default configuration directory
CONFIG_DIR = Path.home() / ".config" / "dsoracle"
CONFIG_FILE = CONFIG_DIR / "init.json"

# Default settings
DEFAULT_SETTINGS = {
    "seed": 42,
    "epsilon": 0.5,
    "k": 2,
    "source": 0,
    "apasp_full_cutoff": 80,      # exhaustive apasp verification up to this n
    "apasp_sampled_failures": 50, # failures sampled per (u, v) beyond it
    "version": "0.1.0",
}


def ensure_config_dir():
    """Ensure configuration directory exists."""
    CONFIG_FILE.parent.mkdir(parents=True, exist_ok=True)


def get_config_file_path() -> Path:
    return CONFIG_FILE


def load_settings() -> dict[str, Any]:
    """Load settings from init.json file.

    Returns:
        Dictionary with settings. If file doesn't exist, returns defaults.
    """
    if not CONFIG_FILE.exists():
        return DEFAULT_SETTINGS.copy()

    try:
        with open(CONFIG_FILE, "r") as f:
            settings = json.load(f)

        # Merge with defaults to ensure all keys exist
        result = DEFAULT_SETTINGS.copy()
        result.update(settings)
        return result

    except (json.JSONDecodeError, IOError) as e:
        log.warning("failed to load config from %s: %s; using default settings", CONFIG_FILE, e)
        return DEFAULT_SETTINGS.copy()


def save_settings(settings: dict[str, Any]) -> bool:
    """Save settings to init.json file.

    Args:
        settings: Dictionary with settings to save

    Returns:
        True if successful, False otherwise
    """
    try:
        ensure_config_dir()

        # Merge with existing settings to preserve other values
        current = load_settings()
        current.update(settings)

        with open(CONFIG_FILE, "w") as f:
            json.dump(current, f, indent=2)

        print(f"Settings saved to {CONFIG_FILE}")
        return True

    except (IOError, OSError) as e:
        log.error("failed to save config to %s: %s", CONFIG_FILE, e)
        return False


def _get_int(key: str) -> int:
    value = load_settings().get(key, DEFAULT_SETTINGS[key])
    try:
        return int(value)
    except (TypeError, ValueError):
        return int(DEFAULT_SETTINGS[key])


def get_seed() -> int:
    return _get_int("seed")


def set_seed(seed: int) -> bool:
    try:
        value = int(seed)
    except (TypeError, ValueError):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if value < 0:
        raise ValueError(f"seed must be >= 0, got {value}")
    return save_settings({"seed": value})


def get_epsilon() -> float:
    value = load_settings().get("epsilon", DEFAULT_SETTINGS["epsilon"])
    try:
        return float(value)
    except (TypeError, ValueError):
        return float(DEFAULT_SETTINGS["epsilon"])


def set_epsilon(epsilon: float) -> bool:
    """Save the default accuracy parameter; it must lie in (0, 1)."""
    try:
        value = float(epsilon)
    except (TypeError, ValueError):
        raise ValueError(f"epsilon must be a number, got {epsilon!r}")
    if not 0 < value < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {value}")
    return save_settings({"epsilon": value})


def get_k() -> int:
    return _get_int("k")


def set_k(k: int) -> bool:
    try:
        value = int(k)
    except (TypeError, ValueError):
        raise ValueError(f"k must be an integer, got {k!r}")
    if value <= 1:
        raise ValueError(f"k must be > 1, got {value}")
    return save_settings({"k": value})


def get_source() -> int:
    return _get_int("source")


def get_apasp_full_cutoff() -> int:
    return _get_int("apasp_full_cutoff")


def get_apasp_sampled_failures() -> int:
    return _get_int("apasp_sampled_failures")
