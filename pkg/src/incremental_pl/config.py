"""Flat ``key = value`` run configuration with profile inheritance.

A config file may name a ``profile``; the profile's thresholds are applied
first and any key in the file overrides them. Lines starting with ``#`` are
comments. Example::

    profile = office
    seeds = 0,1,2,3,4
    epochs_round = 10
    angle = 1.5708
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .datagen import DEFAULT_SHIFT, ShiftSpec
from .pipeline import PROFILES, Hyperparams

_INT_KEYS = {"batch_size", "bottleneck", "epochs_source", "epochs_crude", "epochs_student",
             "epochs_warm", "epochs_round", "epochs_finetune", "max_rounds", "stall_limit", "seed"}


class ConfigError(ValueError):
    pass


@dataclass
class DataSpec:
    K: int = 5
    dim: int = 16
    n_s: int = 2000
    n_t: int = 2000
    angle: float = DEFAULT_SHIFT.angle
    translation: float = DEFAULT_SHIFT.translation
    noise: float = DEFAULT_SHIFT.noise
    separation: float = 1.0
    priors: tuple | None = None
    target_priors: tuple | None = None

    @property
    def shift(self) -> ShiftSpec:
        return ShiftSpec(self.angle, self.translation, self.noise)


@dataclass
class RunConfig:
    hp: Hyperparams = field(default_factory=Hyperparams)
    data: DataSpec = field(default_factory=DataSpec)
    profile: str = "office"
    out: Path = Path("run")
    seeds: list[int] = field(default_factory=lambda: [0])


def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value, got {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k] = v
    return out


def _floats(v: str) -> tuple:
    return tuple(float(s) for s in v.split(",") if s.strip())


def build_config(values: dict[str, str], profile: str | None = None, seed: int | None = None,
                 out=None) -> RunConfig:
    """Resolve defaults, then profile, then explicit keys, then command-line overrides."""
    values = dict(values)
    prof = profile or values.pop("profile", "office")
    values.pop("profile", None)
    if prof not in PROFILES:
        raise ConfigError(f"unknown profile {prof!r}; choose from {', '.join(sorted(PROFILES))}")
    hp_kw: dict = dict(PROFILES[prof])
    data = DataSpec()
    seeds = None
    hp_names = {f.name for f in fields(Hyperparams)}
    data_names = {f.name for f in fields(DataSpec)}
    try:
        for k, v in values.items():
            key = "lambda_stop" if k == "lambda" else k
            if key == "seeds":
                seeds = [int(s) for s in v.split(",") if s.strip()]
            elif key == "out":
                out = out or v
            elif key == "hidden":
                hp_kw["hidden"] = tuple(int(s) for s in v.split(",") if s.strip())
            elif key in hp_names:
                if key == "finetune":
                    hp_kw[key] = v
                else:
                    hp_kw[key] = int(v) if key in _INT_KEYS else float(v)
            elif key in data_names:
                if key in ("priors", "target_priors"):
                    setattr(data, key, _floats(v))
                elif key in ("K", "dim", "n_s", "n_t"):
                    setattr(data, key, int(v))
                else:
                    setattr(data, key, float(v))
            else:
                raise ConfigError(f"unknown config key {k!r}")
        if seed is not None:
            hp_kw["seed"] = seed
            seeds = [seed]
        elif seeds and "seed" not in hp_kw:
            hp_kw["seed"] = seeds[0]
        hp = Hyperparams(**hp_kw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if data.K < 2 or data.dim < 2:
        raise ConfigError("need K >= 2 and dim >= 2")
    return RunConfig(hp, data, prof, Path(out) if out else Path("run"),
                     seeds if seeds is not None else [hp.seed])


def load_config(path=None, profile=None, seed=None, out=None) -> RunConfig:
    values = {}
    if path is not None:
        try:
            values = parse_kv(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return build_config(values, profile, seed, out)


def format_config(cfg: RunConfig) -> str:
    """Round-trippable dump of a resolved config."""
    lines = [f"profile = {cfg.profile}", "seeds = " + ",".join(str(s) for s in cfg.seeds)]
    for f in fields(Hyperparams):
        v = getattr(cfg.hp, f.name)
        if f.name == "hidden":
            v = ",".join(str(h) for h in v)
        lines.append(f"{f.name} = {v}")
    for f in fields(DataSpec):
        v = getattr(cfg.data, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = ",".join(repr(float(x)) for x in v)
        elif isinstance(v, (float, np.floating)):
            v = repr(float(v))
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
