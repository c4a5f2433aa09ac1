"""Benchmark run configuration files.

Grammar: ``key = value`` lines, ``#`` comments, ``[section]`` headers.
Sections are ``[plan]``, ``[estimators]`` (defaults for every method),
``[estimators.<method>]`` (per-method overrides) and ``[output]``. Keys
before the first header belong to ``[plan]``. Lists are comma separated.

Example::

    [plan]
    scenarios = broken-rotor, misalignment
    axis = snr
    axis_values = 0, 20, 40
    iterations = 50

    [estimators]
    m_dim = 32

    [estimators.fft-music]
    grid_size = 8192
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from .benchmark import AXIS_KINDS, SweepPlan, default_reference_plan
from .errors import ConfigError
from .estimators import (
    DEFAULT_CORR_METHOD,
    DEFAULT_GRID_SIZE,
    DEFAULT_M_DIM,
    METHODS,
    EstimatorConfig,
)
from .faults import SCENARIO_NAMES, scenario_by_name
from .subspace import CORR_METHODS

__all__ = ["RunConfig", "parse_config", "parse_config_text"]


def _int(text):
    return int(text)


def _float(text):
    return float(text)


def _str(text):
    return text


def _bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _list(conv):
    def parse(text):
        return tuple(conv(v.strip()) for v in text.split(",") if v.strip())

    return parse


_PLAN_KEYS = {
    "scenarios": _list(_str),
    "methods": _list(_str),
    "axis": _str,
    "axis_values": _list(_float),
    "iterations": _int,
    "base_seed": _int,
    "n_samples": _int,
    "fs": _float,
    "sideband_scale": _float,
    "snr_db": _float,
}
_ESTIMATOR_KEYS = {"m_dim": _int, "grid_size": _int, "corr_method": _str}
_OUTPUT_KEYS = {"out_dir": _str, "parallel": _int, "write_log": _bool}


@dataclass
class RunConfig:
    """Everything ``bench`` needs. Defaults reproduce the full reference SNR plan."""

    scenarios: tuple[str, ...] = SCENARIO_NAMES
    methods: tuple[str, ...] = METHODS
    axis: str = "snr"
    axis_values: Optional[tuple[float, ...]] = None
    iterations: int = 200
    base_seed: int = 0
    n_samples: int = 1600
    fs: float = 1000.0
    sideband_scale: float = 0.1
    snr_db: float = 30.0
    m_dim: int = DEFAULT_M_DIM
    grid_size: int = DEFAULT_GRID_SIZE
    corr_method: str = DEFAULT_CORR_METHOD
    overrides: dict[str, dict] = field(default_factory=dict)
    out_dir: str = "results"
    parallel: int = 1
    write_log: bool = True

    def validate(self):
        for name in self.scenarios:
            if name not in SCENARIO_NAMES:
                raise ConfigError(f"unknown scenario {name!r}; valid: {', '.join(SCENARIO_NAMES)}")
        for name in self.methods:
            if name not in METHODS:
                raise ConfigError(f"unknown method {name!r}; valid: {', '.join(METHODS)}")
        if self.axis not in AXIS_KINDS:
            raise ConfigError(f"axis must be one of {AXIS_KINDS}, got {self.axis!r}")
        if self.corr_method not in CORR_METHODS:
            raise ConfigError(f"corr_method must be one of {CORR_METHODS}")
        if self.parallel < 1:
            raise ConfigError("parallel must be >= 1")

    def estimator_configs(self) -> list[EstimatorConfig]:
        configs = []
        for name in self.methods:
            opts = dict(m_dim=self.m_dim, grid_size=self.grid_size, corr_method=self.corr_method)
            opts.update(self.overrides.get(name, {}))
            try:
                configs.append(EstimatorConfig(name, 3, **opts))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        return configs

    def to_plan(self) -> SweepPlan:
        self.validate()
        values = self.axis_values
        if values is None:
            values = default_reference_plan(self.axis).axis_values
        try:
            return SweepPlan(
                scenarios=[scenario_by_name(n) for n in self.scenarios],
                methods=self.estimator_configs(),
                axis_kind=self.axis,
                axis_values=values,
                iterations=self.iterations,
                base_seed=self.base_seed,
                n_samples=self.n_samples,
                fs=self.fs,
                sideband_scale=self.sideband_scale,
                snr_db=self.snr_db,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def parse_config_text(text: str) -> RunConfig:
    cfg = RunConfig()
    section = "plan"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip()
            if section in ("plan", "estimators", "output"):
                continue
            if section.startswith("estimators.") and section.split(".", 1)[1] in METHODS:
                continue
            raise ConfigError(f"unknown section [{section}]", lineno)
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = key.strip(), value.strip()
        if section == "plan":
            table = _PLAN_KEYS
        elif section == "output":
            table = _OUTPUT_KEYS
        else:
            table = _ESTIMATOR_KEYS
        if key not in table:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno)
        try:
            parsed = table[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from exc
        if section.startswith("estimators."):
            cfg.overrides.setdefault(section.split(".", 1)[1], {})[key] = parsed
        else:
            setattr(cfg, key, parsed)
    cfg.validate()
    return cfg


def parse_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)
