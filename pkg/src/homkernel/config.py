import json
import os
from copy import deepcopy
from typing import Any, Dict

from dotenv import load_dotenv


DEFAULT_CONFIG: Dict[str, Any] = {
    "database_path": "data/journal/homkernel.db",
    "kernel": {
        "default_field": "gf32003",
        "resolution_bound": 6,
        "hilbert_prefix": 6,
        "family_max_degree": 3,
        "family_max_gens": 2,
        "torrigid_imax": 4,
        "report_timings": False,
    },
    "logging": {
        "level": "WARNING",
    },
}

FIELD_CHOICES = ("gf32003", "qq")


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _env_overrides() -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    field = os.getenv("HOMKERNEL_FIELD")
    if field:
        if field.lower() not in FIELD_CHOICES:
            raise ValueError(f"HOMKERNEL_FIELD must be one of {FIELD_CHOICES}, got {field!r}")
        overrides.setdefault("kernel", {})["default_field"] = field.lower()
    bound = os.getenv("HOMKERNEL_RES_BOUND")
    if bound:
        overrides.setdefault("kernel", {})["resolution_bound"] = int(bound)
    db_path = os.getenv("HOMKERNEL_DB_PATH")
    if db_path:
        overrides["database_path"] = db_path
    level = os.getenv("HOMKERNEL_LOG_LEVEL")
    if level:
        overrides["logging"] = {"level": level.upper()}
    return overrides


def load_config(path: str = "config.json") -> Dict[str, Any]:
    load_dotenv()
    config = deepcopy(DEFAULT_CONFIG)
    if os.path.exists(path):
        with open(path, "r") as handle:
            config = _deep_merge(config, json.load(handle))
    return _deep_merge(config, _env_overrides())
