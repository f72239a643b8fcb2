"""Declarative run configuration, read from JSON or TOML."""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from manin_dp.fibration import FibrationDescriptor, FibrationError
from manin_dp.lattice import LatticeError, Model, PicardLattice

CACHE_ENV = "MANIN_DP_CACHE"
OUTPUT_FORMATS = ("json", "csv", "table")


class ConfigError(ValueError):
    pass


@dataclass
class CountingConfig:
    q: Fraction = Fraction(2)
    offset: list[int] | None = None
    d_max: int = 50
    stride: int = 1
    genus: int = 1
    brauer_order: int = 1
    profile_count: int = 1
    lattice_index: int = 1


@dataclass
class Config:
    surface: dict = field(default_factory=dict)
    fibration: dict = field(default_factory=dict)
    counting: CountingConfig = field(default_factory=CountingConfig)
    monoid: dict = field(default_factory=dict)
    bundle: dict = field(default_factory=dict)
    cache_dir: str | None = None
    output: str = "json"

    def lattice(self) -> PicardLattice:
        return lattice_from_mapping(self.surface)

    def descriptor(self) -> FibrationDescriptor:
        data = dict(self.fibration)
        if "fiber_degree" not in data:
            data["fiber_degree"] = self.lattice().degree if self.surface else 3
        try:
            return FibrationDescriptor.from_json(data)
        except (TypeError, FibrationError) as e:
            raise ConfigError(f"bad fibration section: {e}") from e

    def resolved_cache_dir(self) -> Path | None:
        if self.cache_dir == "":
            return None
        if self.cache_dir:
            return Path(self.cache_dir)
        env = os.environ.get(CACHE_ENV)
        if env is not None:
            return Path(env) if env else None
        return Path.home() / ".cache" / "manin-dp"


def lattice_from_mapping(s: dict) -> PicardLattice:
    try:
        if not s:
            return PicardLattice.blow_up(6)
        model = s.get("model")
        if model in ("quadric", Model.QUADRIC.value) or s.get("quadric"):
            return PicardLattice.quadric()
        if "degree" in s and s["degree"] is not None:
            return PicardLattice.of_degree(int(s["degree"]))
        if model not in (None, "blowup", Model.BLOW_UP.value):
            raise ConfigError(f"unknown surface model {model!r}")
        return PicardLattice.blow_up(int(s.get("r", 0)))
    except LatticeError as e:
        raise ConfigError(str(e)) from e
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"bad surface section: {e}") from e


_TOP_KEYS = {"surface", "fibration", "counting", "monoid", "bundle", "cache_dir", "output"}


def parse_config(data: dict) -> Config:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping at top level")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = Config()
    for key in ("surface", "fibration", "monoid", "bundle"):
        val = data.get(key, {})
        if not isinstance(val, dict):
            raise ConfigError(f"section {key!r} must be a mapping")
        setattr(cfg, key, dict(val))
    counting = data.get("counting", {})
    if not isinstance(counting, dict):
        raise ConfigError("section 'counting' must be a mapping")
    bad = set(counting) - set(CountingConfig.__dataclass_fields__)
    if bad:
        raise ConfigError(f"unknown counting keys: {sorted(bad)}")
    try:
        cc = CountingConfig(**counting)
        cc.q = Fraction(str(cc.q))
        for name in ("d_max", "stride", "genus", "brauer_order", "profile_count", "lattice_index"):
            setattr(cc, name, int(getattr(cc, name)))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad counting section: {e}") from e
    cfg.counting = cc
    if "cache_dir" in data:
        cfg.cache_dir = str(data["cache_dir"])
    out = data.get("output", "json")
    if out not in OUTPUT_FORMATS:
        raise ConfigError(f"output must be one of {OUTPUT_FORMATS}, got {out!r}")
    cfg.output = out
    return cfg


def load_config(path: str | os.PathLike) -> Config:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read config {p}: {e}") from e
    try:
        if p.suffix.lower() == ".toml":
            data = tomllib.loads(raw.decode())
        else:
            data = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot parse config {p}: {e}") from e
    return parse_config(data)
