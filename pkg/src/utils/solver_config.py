"""
Solver Configuration for BodySlice

This module defines the default numerical settings and the environment
variables that may override them. Command-line flags win over both.
"""

import os
from enum import Enum
from typing import Any, Callable, Dict, List, TypedDict

from .env_loader import load_project_env


class SettingKey(str, Enum):
    """Configurable settings."""
    EPS = "eps"
    SEED = "seed"
    SAMPLES = "samples"
    WORKERS = "workers"
    MAX_ITER_FACTOR = "max_iter_factor"
    TRACE = "trace"
    TRACING = "tracing"


class SettingSpec(TypedDict):
    """Definition of one setting."""
    env_var: str
    default: Any
    parse: Callable[[str], Any]
    description: str


def _parse_bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("true", "1", "yes", "on"):
        return True
    if value in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


SETTINGS: Dict[SettingKey, SettingSpec] = {
    SettingKey.EPS: {
        "env_var": "BODYSLICE_EPS",
        "default": 1e-7,
        "parse": float,
        "description": "MVEE approximation tolerance",
    },
    SettingKey.SEED: {
        "env_var": "BODYSLICE_SEED",
        "default": 42,
        "parse": int,
        "description": "Seed for every random corpus and restart",
    },
    SettingKey.SAMPLES: {
        "env_var": "BODYSLICE_SAMPLES",
        "default": 4096,
        "parse": int,
        "description": "Direction samples for support-function sweeps",
    },
    SettingKey.WORKERS: {
        "env_var": "BODYSLICE_WORKERS",
        "default": 0,
        "parse": int,
        "description": "Parallel workers (0 = machine parallelism, 1 = serial)",
    },
    SettingKey.MAX_ITER_FACTOR: {
        "env_var": "BODYSLICE_MAX_ITER_FACTOR",
        "default": 100_000,
        "parse": int,
        "description": "MVEE iteration cap is this factor times n",
    },
    SettingKey.TRACE: {
        "env_var": "BODYSLICE_TRACE",
        "default": False,
        "parse": _parse_bool,
        "description": "Print [TRACE]/[DEBUG] lines on stderr",
    },
    SettingKey.TRACING: {
        "env_var": "BODYSLICE_TRACING",
        "default": False,
        "parse": _parse_bool,
        "description": "Attach an Opik tracer to CLI runs",
    },
}

_warnings: List[str] = []


def get_setting(key: str) -> Any:
    """
    Resolve one setting: environment override if valid, default otherwise.

    Invalid overrides are recorded (see get_config_warnings) and ignored.
    """
    load_project_env()
    spec = SETTINGS[SettingKey(key)]
    raw = os.getenv(spec["env_var"])
    if raw is None or not raw.strip():
        return spec["default"]
    try:
        return spec["parse"](raw)
    except ValueError:
        message = f"{spec['env_var']}={raw!r} is invalid, using default {spec['default']!r}"
        if message not in _warnings:
            _warnings.append(message)
        return spec["default"]


def get_config_warnings() -> List[str]:
    """Warnings produced while resolving settings."""
    return list(_warnings)


def trace_enabled() -> bool:
    return bool(get_setting(SettingKey.TRACE))


def default_max_iterations(n: int) -> int:
    return int(get_setting(SettingKey.MAX_ITER_FACTOR)) * max(1, n)


def describe_settings() -> List[Dict[str, Any]]:
    """Current value of every setting, for --help epilogues and debugging."""
    return [
        {
            "key": key.value,
            "env_var": spec["env_var"],
            "value": get_setting(key),
            "description": spec["description"],
        }
        for key, spec in SETTINGS.items()
    ]
