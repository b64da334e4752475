"""Configuration module: loads packaged YAML defaults, defines the typed Config.

Packaged defaults live in src/hwatopics/data/defaults.yaml. A user config file
uses the same keys (plus input/output paths). `resolve_config` applies the
precedence flags > config file > defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from hwatopics.errors import ConfigError, InputError

DATA_DIR = Path(__file__).parent / "data"

PATH_KEYS = ("posts", "stopwords", "vectors", "gt", "out")


# ---------------------------------------------------------------------------
# YAML loaders (cached at module level)
# ---------------------------------------------------------------------------

_cache: dict = {}


def _load_yaml(filename: str) -> dict:
    """Load a YAML file from the data directory, with caching."""
    if filename not in _cache:
        with open(DATA_DIR / filename, encoding="utf-8") as f:
            _cache[filename] = yaml.safe_load(f)
    return _cache[filename]


def load_defaults() -> dict:
    """Load defaults.yaml."""
    return _load_yaml("defaults.yaml")


def inclusive_range(start: float, stop: float, step: float) -> tuple[float, ...]:
    """Evenly spaced grid from start to stop inclusive.

    Values are rounded to 10 decimals so 0.1-step grids compare equal to the
    literals a user would type (0.3, not 0.30000000000000004).
    """
    if step <= 0:
        raise ConfigError(f"Grid step must be positive, got {step}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(float(start + i * step), 10) for i in range(max(n, 0)))


def _grid_from_yaml(entry: Mapping[str, float]) -> tuple[float, ...]:
    return inclusive_range(entry["start"], entry["stop"], entry["step"])


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Config:
    """Every knob of a detect / evaluate / tune run.

    Field defaults mirror data/defaults.yaml; `Config.defaults()` reads the
    YAML itself so the two cannot drift silently (tested).
    """

    window_minutes: int = 720
    h: float = 30.0
    delta: float = 0.5
    log_base: float | None = None
    min_cluster_size: int = 5
    min_samples: int | None = None
    allow_single_cluster: bool = True
    top_k: int | None = None
    match_threshold: float = 0.0
    keyword_m: int = 2
    topk_grid: tuple[int, ...] = (2, 4, 6, 8, 10, 12, 14, 16, 18, 20)
    workers: int = 1
    h_grid: tuple[float, ...] = field(default_factory=lambda: inclusive_range(5, 50, 5))
    delta_grid: tuple[float, ...] = field(
        default_factory=lambda: inclusive_range(0.1, 1.0, 0.1)
    )
    origin: int | None = None
    posts: Path | None = None
    stopwords: Path | None = None
    vectors: Path | None = None
    gt: Path | None = None
    out: Path | None = None

    @property
    def window_seconds(self) -> int:
        return self.window_minutes * 60

    @classmethod
    def defaults(cls) -> Config:
        """Config built from the packaged defaults.yaml."""
        return cls().updated(load_defaults())

    def updated(self, values: Mapping[str, Any]) -> Config:
        """Return a copy with `values` applied. Unknown keys raise ConfigError."""
        known = {f.name for f in fields(self)}
        changes: dict[str, Any] = {}
        for key, value in values.items():
            if key == "tune":
                if value is None:
                    continue
                if not isinstance(value, Mapping):
                    raise ConfigError("'tune' must be a mapping with h_grid/delta_grid")
                for grid_key in ("h_grid", "delta_grid"):
                    if grid_key in value:
                        changes[grid_key] = _coerce_grid(grid_key, value[grid_key])
                continue
            if key not in known:
                raise ConfigError(f"Unknown config key: {key!r}")
            changes[key] = _coerce(key, value)
        return replace(self, **changes)

    def validate(self) -> list[str]:
        """Validate parameter ranges. Returns list of errors (empty = OK)."""
        errors = []
        if not (0 < self.h <= 100):
            errors.append(f"h = {self.h} (must be in (0, 100])")
        if not (0 < self.delta <= 1):
            errors.append(f"delta = {self.delta} (must be in (0, 1])")
        if self.min_cluster_size < 2:
            errors.append(f"min_cluster_size = {self.min_cluster_size} (must be >= 2)")
        if self.min_samples is not None and self.min_samples < 1:
            errors.append(f"min_samples = {self.min_samples} (must be >= 1)")
        if self.window_minutes < 1:
            errors.append(f"window_minutes = {self.window_minutes} (must be >= 1)")
        if self.top_k is not None and self.top_k < 1:
            errors.append(f"top_k = {self.top_k} (must be >= 1)")
        if not (0 <= self.match_threshold <= 1):
            errors.append(f"match_threshold = {self.match_threshold} (must be in [0, 1])")
        if self.keyword_m < 1:
            errors.append(f"keyword_m = {self.keyword_m} (must be >= 1)")
        if self.log_base is not None and (self.log_base <= 0 or self.log_base == 1):
            errors.append(f"log_base = {self.log_base} (must be > 0 and != 1)")
        if self.workers < 1:
            errors.append(f"workers = {self.workers} (must be >= 1)")
        if self.origin is not None and self.origin < 0:
            errors.append(f"origin = {self.origin} (must be >= 0)")
        if any(k < 1 for k in self.topk_grid):
            errors.append(f"topk_grid = {list(self.topk_grid)} (values must be >= 1)")
        for h in self.h_grid:
            if not (0 < h <= 100):
                errors.append(f"h_grid value {h} (must be in (0, 100])")
        for d in self.delta_grid:
            if not (0 < d <= 1):
                errors.append(f"delta_grid value {d} (must be in (0, 1])")
        return errors

    def ensure_valid(self) -> Config:
        """Raise ConfigError listing every problem; return self when valid."""
        errors = self.validate()
        if errors:
            raise ConfigError("Invalid configuration: " + "; ".join(errors))
        return self


_INT_KEYS = {"window_minutes", "min_cluster_size", "min_samples", "top_k", "keyword_m",
             "workers", "origin"}
_FLOAT_KEYS = {"h", "delta", "log_base", "match_threshold"}


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if key in PATH_KEYS:
            return Path(value)
        if key in _INT_KEYS:
            if isinstance(value, bool) or int(value) != float(value):
                raise ValueError(value)
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "allow_single_cluster":
            if not isinstance(value, bool):
                raise ValueError(value)
            return value
        if key == "topk_grid":
            return tuple(int(k) for k in value)
        if key in ("h_grid", "delta_grid"):
            return _coerce_grid(key, value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Bad value for {key!r}: {value!r}") from exc
    return value


def _coerce_grid(key: str, value: Any) -> tuple[float, ...]:
    if isinstance(value, Mapping):
        try:
            return _grid_from_yaml(value)
        except KeyError as exc:
            raise ConfigError(f"{key} needs start, stop and step") from exc
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Bad value for {key!r}: {value!r}") from exc


def load_config_file(path: Path) -> dict:
    """Read a user config file (YAML mapping; JSON is accepted as YAML)."""
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as exc:
        raise InputError(f"Config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Config file {path} is not valid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a key-value mapping")
    return data


def resolve_config(
    overrides: Mapping[str, Any] | None = None,
    config_path: Path | None = None,
) -> Config:
    """Build the effective Config: flags > config file > packaged defaults.

    `overrides` holds only the flags the user actually set (None values are
    ignored so an unset flag never masks the config file).
    """
    config = Config.defaults()
    if config_path is not None:
        config = config.updated(load_config_file(config_path))
    if overrides:
        config = config.updated({k: v for k, v in overrides.items() if v is not None})
    return config.ensure_valid()
