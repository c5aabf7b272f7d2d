"""Run configuration and validation.

A configuration is harness-only knowledge: neither the agent count nor the
treasure distance is ever visible to the controllers.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, asdict
from typing import Optional

from .engine import Coord

STRATEGIES = ("rect-oracle", "rect-psta", "geom", "hybrid")
RECT_STRATEGIES = ("rect-oracle", "rect-psta", "hybrid")

SEED_ENV_VAR = "ANTSIM_SEED"
DEFAULT_SEED = 0


class ConfigError(Exception):
    """Invalid run configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class TreasureSpec:
    """Treasure placement policy.

    kind 'explicit' uses `coord`; 'on-level' the `index`-th cell
    (counterclockwise from (D, 0)) of level `distance`; 'random-on-level' a
    uniform cell of the level; 'worst-of-level' the placement on the level
    that maximizes the discovery round; 'none' runs without a treasure.
    """
    kind: str = "none"
    coord: Optional[Coord] = None
    distance: int = 0
    index: int = 0

    def validate(self) -> None:
        if self.kind not in ("none", "explicit", "on-level",
                             "random-on-level", "worst-of-level"):
            raise ConfigError(f"unknown treasure kind {self.kind!r}")
        if self.kind == "explicit" and self.coord is None:
            raise ConfigError("explicit treasure needs a coordinate")
        if self.kind in ("on-level", "random-on-level", "worst-of-level"):
            if self.distance < 1:
                raise ConfigError("treasure level must be positive")
            if self.kind == "on-level" and not (
                    0 <= self.index < 4 * self.distance):
                raise ConfigError(
                    f"on-level index {self.index} out of range for level "
                    f"{self.distance} (0..{4 * self.distance - 1})")


@dataclass
class RunConfig:
    n: int = 5
    strategy: str = "rect-oracle"
    treasure: TreasureSpec = field(default_factory=TreasureSpec)
    seed: int = DEFAULT_SEED
    max_rounds: int = 1000
    trace_path: Optional[str] = None
    trace_stride: int = 1
    metrics_out: Optional[str] = None
    assert_invariants: bool = False
    check_fraction: bool = False
    parallelism: int = 1
    shuffle_order: bool = False

    def validate(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.n < 1:
            raise ConfigError("need at least one agent")
        if self.strategy in RECT_STRATEGIES and self.n < 5:
            raise ConfigError(
                f"strategy {self.strategy} needs at least 5 agents, got {self.n}")
        if self.max_rounds < 0:
            raise ConfigError("max_rounds must be nonnegative")
        if self.trace_stride < 1:
            raise ConfigError("trace stride must be positive")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be positive")
        self.treasure.validate()


def default_seed() -> int:
    """Seed used when none is given; overridable via the environment."""
    value = os.environ.get(SEED_ENV_VAR)
    if value is None:
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer") from exc


def config_from_dict(data: dict) -> RunConfig:
    data = dict(data)
    tdata = data.pop("treasure", None)
    cfg = RunConfig()
    for key, value in data.items():
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown config field {key!r}")
        setattr(cfg, key, value)
    if tdata is not None:
        coord = tdata.get("coord")
        cfg.treasure = TreasureSpec(
            kind=tdata.get("kind", "none"),
            coord=tuple(coord) if coord is not None else None,
            distance=tdata.get("distance", 0),
            index=tdata.get("index", 0),
        )
    cfg.validate()
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data)


def config_to_dict(cfg: RunConfig) -> dict:
    data = asdict(cfg)
    data["treasure"] = asdict(cfg.treasure)
    return data
