"""Run configuration: defaults, validation, parsing, and a stable digest."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .types import SPEED_INDICES, EnvVariant, InputType

# Occupancy limit per speed index: 1.1 - v, clamped to [0.1, 1.0].  Expressed
# in tenths so the defaults come out as exact decimal floats.
DEFAULT_OCCUPANCY_LIMITS = tuple(min(max(11 - i, 1), 10) / 10 for i in SPEED_INDICES)


class ConfigError(ValueError):
    """A configuration value is missing, malformed, or out of range."""


@dataclass(frozen=True)
class EnvConfig:
    """Full parameterization of one environment run."""

    variant: EnvVariant = EnvVariant.BASIC
    input_type: InputType = InputType.RANDOM
    obs_noise_level: float = 0.0
    action_penalty: float = 0.0
    threshold: float = 0.7
    abatement: float = 3.0
    r_acc: float = 0.5
    r_speed: float = 0.5
    base_noise_range: tuple[float, float] = (0.10, 0.15)
    correct_mode_noise_range: tuple[float, float] = (0.0, 0.05)
    incorrect_mode_noise_range: tuple[float, float] = (0.10, 0.15)
    occupancy_limits: tuple[float, ...] = DEFAULT_OCCUPANCY_LIMITS
    episode_length: int = 50
    seed: int = 0

    def validate(self) -> "EnvConfig":
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.episode_length < 1:
            raise ConfigError(f"episode_length must be positive, got {self.episode_length}")
        for name in ("obs_noise_level", "action_penalty", "abatement", "r_acc", "r_speed"):
            value = getattr(self, name)
            if value < 0.0:
                raise ConfigError(f"{name} must be non-negative, got {value}")
        for name in ("base_noise_range", "correct_mode_noise_range", "incorrect_mode_noise_range"):
            lo, hi = getattr(self, name)
            if not 0.0 <= lo <= hi:
                raise ConfigError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")
        limits = self.occupancy_limits
        if len(limits) != len(SPEED_INDICES):
            raise ConfigError(f"occupancy_limits needs {len(SPEED_INDICES)} entries, got {len(limits)}")
        if any(not 0.0 <= x <= 1.0 for x in limits):
            raise ConfigError(f"occupancy_limits must lie in [0, 1], got {limits}")
        if any(limits[i] < limits[i + 1] for i in range(len(limits) - 1)):
            raise ConfigError("occupancy_limits must not increase with speed")
        return self

    def limit_for_speed(self, speed_index: int) -> float:
        return self.occupancy_limits[speed_index - 1]

    def digest(self) -> str:
        """Short stable hash of every field, for tagging traces and reports."""
        parts = []
        for field in fields(self):
            value = getattr(self, field.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, tuple):
                value = ",".join(repr(float(x)) for x in value)
            parts.append(f"{field.name}={value!r}")
        blob = ";".join(parts).encode("ascii")
        return hashlib.sha256(blob).hexdigest()[:12]


_RANGE_FIELDS = {
    "base_noise_range",
    "correct_mode_noise_range",
    "incorrect_mode_noise_range",
}


def _parse_range(value: Any, name: str, size: int | None = 2) -> tuple[float, ...]:
    if isinstance(value, str):
        items = [part for part in value.replace(",", " ").split() if part]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        raise ConfigError(f"{name} expects {size or 'several'} numbers, got {value!r}")
    try:
        parsed = tuple(float(x) for x in items)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} contains a non-numeric entry: {value!r}") from None
    if size is not None and len(parsed) != size:
        raise ConfigError(f"{name} expects {size} numbers, got {len(parsed)}")
    return parsed


def config_from_mapping(mapping: Mapping[str, Any], base: EnvConfig | None = None) -> EnvConfig:
    """Build a config from field-name keys, starting from ``base`` (or defaults).

    Accepts both typed values (e.g. from a decoded wire message) and the string
    forms used in config files.  Unknown keys are rejected.
    """
    config = base if base is not None else EnvConfig()
    known = {field.name for field in fields(config)}
    updates: dict[str, Any] = {}
    for key, raw in mapping.items():
        name = key.strip()
        if name not in known:
            raise ConfigError(f"unknown config key {name!r}")
        try:
            if name == "variant":
                updates[name] = raw if isinstance(raw, EnvVariant) else EnvVariant(str(raw).lower())
            elif name == "input_type":
                updates[name] = raw if isinstance(raw, InputType) else InputType(str(raw).lower())
            elif name in _RANGE_FIELDS:
                updates[name] = _parse_range(raw, name)
            elif name == "occupancy_limits":
                updates[name] = _parse_range(raw, name, size=len(SPEED_INDICES))
            elif name in ("episode_length", "seed"):
                updates[name] = int(raw)
            else:
                updates[name] = float(raw)
        except ConfigError:
            raise
        except (TypeError, ValueError):
            raise ConfigError(f"bad value for {name!r}: {raw!r}") from None
    return replace(config, **updates).validate()


def load_config_file(path: str | Path, base: EnvConfig | None = None) -> EnvConfig:
    """Read ``key = value`` lines (# starts a comment) into a config."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        mapping[key.strip()] = value.strip()
    return config_from_mapping(mapping, base)
