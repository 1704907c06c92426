"""Configuration management for homcx."""

import copy
import json
import logging
import os
import tempfile
import time
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "limits": {
        # Hom-complex enumeration stops with exit code 3 past this many cells.
        "cell_cap": 2_000_000,
        # Node budget for shelling / tree-like backtracking.
        "search_budget": 200_000,
        # Tietze passes and word-length ceiling for the pi_1 attempt.
        "pi1_passes": 50,
        "pi1_max_word": 400,
        # Branch-and-bound nodes for exact colouring.
        "coloring_budget": 5_000_000,
    },
    "homology": {
        # Entries above this in the int64 Smith form trigger arbitrary precision.
        "int64_guard": 2 ** 31,
        "workers": 1,
    },
    "output": {
        "json_indent": 2,
        "verbose": False,
    },
}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``.

    Nested dicts are merged key by key; any other value in ``override`` wins.
    Keys only present in ``override`` are kept.
    """
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def get_config_dir() -> Path:
    """Get the homcx configuration directory (``~/.homcx`` by default)."""
    env_dir = os.environ.get("HOMCX_CONFIG_DIR")
    config_dir = Path(env_dir) if env_dir else Path.home() / ".homcx"
    config_dir.mkdir(parents=True, exist_ok=True)
    return config_dir


def get_config_path() -> Path:
    """Get the path to the configuration file."""
    return get_config_dir() / "config.json"


def load_config() -> Dict[str, Any]:
    """Load configuration from disk, or create the default file if missing."""
    config_path = get_config_path()

    if config_path.exists():
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                loaded = json.load(f)
            if not isinstance(loaded, dict):
                raise ValueError("top-level JSON value is not an object")
            # deep_merge copies only one level of the defaults; callers may mutate.
            return copy.deepcopy(deep_merge(DEFAULT_CONFIG, loaded))
        except Exception as e:
            logger.warning("Failed to load config %s: %s", config_path, e)
            return copy.deepcopy(DEFAULT_CONFIG)

    save_config(DEFAULT_CONFIG)
    return copy.deepcopy(DEFAULT_CONFIG)


def _atomic_replace(src: str, dst: str):
    """Replace dst with src atomically, retrying transient PermissionErrors."""
    max_retries = 5
    for i in range(max_retries):
        try:
            os.replace(src, dst)
            return
        except PermissionError:
            if i == max_retries - 1:
                raise
            time.sleep(0.1 * (i + 1))


def atomic_write_json(path: Path, data: Any, indent: Optional[int] = 2) -> None:
    """Write ``data`` as JSON to ``path`` through a temp file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.stem}_", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as tf:
            json.dump(data, tf, indent=indent, sort_keys=True)
            tf.write("\n")
        _atomic_replace(temp_path, str(path))
    except Exception:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise


def save_config(config: Dict[str, Any]) -> bool:
    """Save configuration to disk (atomic with retry)."""
    try:
        atomic_write_json(get_config_path(), config)
        return True
    except Exception as e:
        logger.error("Could not save config: %s", e)
        return False


def get_limit(name: str, config: Optional[Dict[str, Any]] = None) -> Any:
    """Look up ``limits.<name>``, falling back to the built-in default."""
    cfg = config if config is not None else load_config()
    limits = cfg.get("limits", {})
    if name in limits:
        return limits[name]
    return DEFAULT_CONFIG["limits"][name]
