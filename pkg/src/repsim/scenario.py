"""Scenario files: human-editable TOML, every omitted key filled from the
documented defaults, resolved config echoed for provenance."""

from __future__ import annotations

import dataclasses
import sys
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .engine import (
    AllocatorConfig,
    ContentConfig,
    ControllerConfig,
    DemandConfig,
    GroupSpec,
    InterestParams,
    MetricsConfig,
    RoutingConfig,
    ScenarioConfig,
)


class ScenarioError(ValueError):
    """Scenario file could not be parsed or failed validation."""


_SECTIONS = {
    "demand": DemandConfig,
    "content": ContentConfig,
    "allocator": AllocatorConfig,
    "controller": ControllerConfig,
    "interest": InterestParams,
    "routing": RoutingConfig,
    "metrics": MetricsConfig,
}

_TOP_KEYS = {
    "iterations": int,
    "acquaintance": int,
    "seed": int,
    "exponent": float,
    "universal_capacity": float,
    "eta": float,
    "smoothing": float,
    "newcomer_score": float,
}


def _coerce(name: str, value: Any, kind: type) -> Any:
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"field {name!r} must be an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise ScenarioError(f"field {name!r} must be {kind.__name__}, got {value!r}")
    return value


def _fill_section(name: str, cls: type, data: dict) -> Any:
    defaults = cls()  # field kinds read off the default values
    kwargs = {}
    for key, value in data.items():
        if key not in {f.name for f in dataclasses.fields(cls)}:
            raise ScenarioError(f"unknown key {key!r} in section [{name}]")
        kwargs[key] = _coerce(f"{name}.{key}", value, type(getattr(defaults, key)))
    return cls(**kwargs)


def _parse_group(idx: int, data: dict) -> GroupSpec:
    known = {
        "count": int, "label": str, "download_capacity": float,
        "shared": float, "policy": str, "strategy": str, "multiplier": float,
    }
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ScenarioError(f"unknown key {key!r} in [[groups]] entry {idx}")
        kwargs[key] = _coerce(f"groups[{idx}].{key}", value, known[key])
    if "count" not in kwargs:
        raise ScenarioError(f"[[groups]] entry {idx} is missing 'count'")
    return GroupSpec(**kwargs)


def config_from_dict(raw: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed TOML data, applying defaults."""
    kwargs: dict[str, Any] = {}
    for key, value in raw.items():
        if key in _TOP_KEYS:
            kwargs[key] = _coerce(key, value, _TOP_KEYS[key])
        elif key in _SECTIONS:
            kwargs[key] = _fill_section(key, _SECTIONS[key], value)
        elif key == "groups":
            if not isinstance(value, list):
                raise ScenarioError("groups must be an array of tables")
            kwargs["groups"] = [_parse_group(i, g) for i, g in enumerate(value)]
        else:
            raise ScenarioError(f"unknown top-level key {key!r}")
    return ScenarioConfig(**kwargs)


def parse_scenario(path: str | Path) -> ScenarioConfig:
    """Parse a TOML scenario file into a fully-defaulted ScenarioConfig."""
    text = Path(path).read_bytes()
    try:
        raw = tomllib.loads(text.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: parse error: {exc}") from exc
    return config_from_dict(raw)


def resolved_dict(config: ScenarioConfig) -> dict:
    """The fully resolved configuration (defaults filled in), for echoing
    into manifests and run provenance."""
    out = dataclasses.asdict(config)
    out["n_nodes"] = config.n_nodes
    out["universal_capacity"] = config.resolved_universal_capacity()
    out["newcomer_score"] = config.resolved_newcomer_score()
    return out
