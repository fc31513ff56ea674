from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any

from cdlp.benchmarks.gn import GnConfig
from cdlp.benchmarks.lfr import LfrConfig
from cdlp.config import defaults
from cdlp.errors import ConfigError, ParseError

FAMILIES = ("gn", "lfr")
SELECTIONS = ("modularity", "nmi")
GN_OVERRIDES = {"n": int, "groups": int, "group_size": int, "avg_degree": float}
LFR_OVERRIDES = {
    "n": int, "k_avg": float, "k_max": int, "gamma": float, "beta": float,
    "tolerance": float, "max_sweeps": int,
}


def _as_list(value: Any) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _number(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name} must be a finite number, got {value!r}")
    return float(value)


def _integer(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _flag(name: str, value: Any) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{name} must be true or false, got {value!r}")
    return value


def _overrides(name: str, given: Any, allowed: dict[str, type]) -> dict:
    if not isinstance(given, dict):
        raise ConfigError(f"{name} must be an object, got {given!r}")
    extra = set(given) - set(allowed)
    if extra:
        raise ConfigError(f"unknown {name} keys: {sorted(extra)}")
    cast = {int: _integer, float: _number}
    return {k: cast[allowed[k]](f"{name}.{k}", v) for k, v in given.items()}


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One sweep: for every sweep value x instance, a benchmark graph is generated
    once and every method x (p_d, p_a) x selection is evaluated on it.
    """

    family: str
    sweep: list[float]
    instances: int = defaults.INSTANCES_PER_POINT
    methods: list[str] = field(default_factory=lambda: list(defaults.METHODS))
    p_d: list[float] = field(default_factory=lambda: [defaults.DEFAULT_P_D])
    p_a: list[float] = field(default_factory=lambda: [defaults.DEFAULT_P_A])
    selections: list[str] = field(default_factory=lambda: ["modularity"])
    include_raw: bool = False
    master_seed: int = defaults.MASTER_SEED
    workers: int = 1
    record_wall_time: bool = True
    gn: dict = field(default_factory=dict)
    lfr: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("sweep", "p_d", "p_a", "methods", "selections"):
            object.__setattr__(self, name, _as_list(getattr(self, name)))
        self.validate()

    def _set(self, name: str, value: Any) -> None:
        object.__setattr__(self, name, value)

    def validate(self) -> None:
        """Type-check and range-check every field, normalising numbers in place."""
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        for name in ("instances", "workers"):
            if _integer(name, getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {getattr(self, name)!r}")
        if _integer("master_seed", self.master_seed) < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        _flag("include_raw", self.include_raw)
        _flag("record_wall_time", self.record_wall_time)

        self._set("sweep", [_number("sweep", v) for v in self.sweep])
        if not self.sweep:
            raise ConfigError("sweep must list at least one value")
        self._set("gn", _overrides("gn", self.gn, GN_OVERRIDES))
        self._set("lfr", _overrides("lfr", self.lfr, LFR_OVERRIDES))
        # building each benchmark config range-checks the sweep against the overrides
        for v in self.sweep:
            if self.family == "gn":
                GnConfig(z_out=v, **self.gn)
            else:
                LfrConfig(mu=v, **self.lfr)

        unknown = [m for m in self.methods if m not in defaults.METHODS]
        if unknown or not self.methods:
            raise ConfigError(f"unknown methods {unknown}; expected a subset of {defaults.METHODS}")
        for name in ("p_d", "p_a"):
            values = [_number(name, v) for v in getattr(self, name)]
            bad = [v for v in values if not 0.0 <= v < 1.0]
            if bad or not values:
                raise ConfigError(f"{name} values must lie in [0, 1): {bad}")
            self._set(name, values)
        bad = [s for s in self.selections if s not in SELECTIONS]
        if bad or not self.selections:
            raise ConfigError(f"selections must be a subset of {SELECTIONS}, got {self.selections}")

    def to_dict(self) -> dict:
        return asdict(self)


def spec_from_dict(obj: dict, source: str = "<dict>") -> ExperimentSpec:
    if not isinstance(obj, dict):
        raise ParseError("experiment spec must be a JSON object", source)
    known = {f.name for f in fields(ExperimentSpec)}
    unknown = sorted(set(obj) - known)
    if unknown:
        raise ConfigError(f"{source}: unknown experiment keys {unknown}")
    missing = [k for k in ("family", "sweep") if k not in obj]
    if missing:
        raise ConfigError(f"{source}: missing required keys {missing}")
    return ExperimentSpec(**obj)


def load_experiment_spec(path: str) -> ExperimentSpec:
    with open(path, "rb") as f:
        data = f.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError("file is not valid UTF-8", path, data.count(b"\n", 0, e.start) + 1) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path, e.lineno) from None
    return spec_from_dict(obj, source=path)


def save_experiment_spec(spec: ExperimentSpec, path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(spec.to_dict(), f, indent=2)


def preset_spec(name: str, master_seed: int = defaults.MASTER_SEED) -> ExperimentSpec:
    """Sweeps and sensitivity grids used in the published experiments."""
    grid = list(defaults.SENSITIVITY_GRID)
    presets = {
        "gn-sweep": dict(family="gn", sweep=defaults.GN_SWEEP),
        "lfr-sweep": dict(family="lfr", sweep=defaults.LFR_SWEEP),
        "gn-sensitivity": dict(family="gn", sweep=[defaults.SENSITIVITY_GN_Z_OUT],
                               methods=["cdlp"], p_d=grid, p_a=grid),
        "lfr-sensitivity": dict(family="lfr", sweep=[defaults.SENSITIVITY_LFR_MU],
                                methods=["cdlp"], p_d=grid, p_a=grid),
    }
    if name not in presets:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(presets)}")
    return ExperimentSpec(master_seed=master_seed, selections=["modularity", "nmi"], **presets[name])


PRESETS = ("gn-sweep", "lfr-sweep", "gn-sensitivity", "lfr-sensitivity")
