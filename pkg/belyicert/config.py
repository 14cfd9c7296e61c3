"""
Configuration for belyicert.

Values are read from a JSON file (``config.json`` in the working directory, or
the path in ``BELYICERT_CONFIG``) with hardcoded fallbacks, then individual
budget keys can be overridden from the environment. See config.example.json.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

# ============================================================
# DEFAULTS
# ============================================================

DEFAULT_CLASS_SIZE = 30_000_000
DEFAULT_CLASS_SECONDS = 600.0
DEFAULT_TABLE_ORDER = 4_000_000
DEFAULT_GENERATION_CHECKS = 100_000
DEFAULT_SEED = 1
DEFAULT_RANDOM_PRESIFT = 20
DEFAULT_SAMPLE_EVERY = 64

REPORT_SCHEMA_VERSION = "1.0"

_ENV_OVERRIDES = {
    "BELYICERT_CLASS_SIZE": ("budget", "classSize", int),
    "BELYICERT_CLASS_SECONDS": ("budget", "classSeconds", float),
    "BELYICERT_TABLE_ORDER": ("budget", "tableOrder", int),
    "BELYICERT_MAX_RSS_MB": ("budget", "maxRssMb", int),
    "BELYICERT_GENERATION_CHECKS": ("budget", "generationChecks", int),
    "BELYICERT_SEED": (None, "seed", int),
}


def _read_json(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        return {}
    except (OSError, json.JSONDecodeError) as e:
        logger.warning("ignoring unreadable config %s: %s", path, e)
        return {}


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Load the configuration dict.

    Args:
        path: Explicit config file. Falls back to ``BELYICERT_CONFIG`` and then
            to ``./config.json``. A missing file yields an empty config.

    Returns:
        Dict with the (possibly empty) ``budget``, ``schreierSims`` and
        ``fingerprint`` sections and an optional ``seed``.
    """
    if path is None:
        path = os.environ.get("BELYICERT_CONFIG", "config.json")
    cfg = _read_json(Path(path).expanduser())

    for var, (section, key, cast) in _ENV_OVERRIDES.items():
        raw = os.environ.get(var)
        if raw is None:
            continue
        try:
            value = cast(float(raw)) if cast is int else cast(raw)
        except ValueError:
            logger.warning("ignoring %s=%r: not a number", var, raw)
            continue
        target = cfg.setdefault(section, {}) if section else cfg
        target[key] = value
    return cfg


def cfg_get(cfg: Dict[str, Any], section: str, key: str, default: Any) -> Any:
    """``cfg[section][key]`` with a fallback."""
    return cfg.get(section, {}).get(key, default)
