"""Scenario configuration: a flat YAML mapping validated into :class:`ScenarioConfig`.

Every key is optional. Unknown keys, duplicate keys and malformed values are
rejected with the offending key (or the line and column for syntax errors).
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import yaml

from .channel import DEFAULT_ALPHA_GRID
from .modes import MIN_DIRECT_ACCELERATION, MIN_POINTS_PER_WAVELENGTH

__all__ = ["SweepKind", "ScenarioConfig", "ConfigError", "validate_config", "config_from_mapping", "default_accelerations"]


class ConfigError(ValueError):
    pass


class SweepKind(str, enum.Enum):
    ALPHA_CURVE = "alpha_curve"
    NEGATIVITY_1D = "negativity_1d"
    NEGATIVITY_2D = "negativity_2d"
    FIDELITY_1D = "fidelity_1d"
    FIDELITY_2D = "fidelity_2d"
    MUTUAL_INFO_1D = "mutual_info_1d"
    MUTUAL_INFO_2D = "mutual_info_2d"
    LOCC_COMPARISON = "locc_comparison"

    @property
    def is_2d(self) -> bool:
        return self.value.endswith("_2d") or self is SweepKind.LOCC_COMPARISON


def default_accelerations(kind: SweepKind, upper: float) -> tuple[float, ...]:
    if kind is SweepKind.ALPHA_CURVE:
        return ()
    count = 40 if kind.is_2d else 51
    return tuple(float(a) for a in np.linspace(0.0, upper, count))


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario.

    ``accelerations`` is the sweep axis (both axes for 2-D kinds unless
    ``accelerations_II`` is given); ``alpha_grid`` holds the nodes at which
    overlaps are actually computed. Empty tuples mean "use the default".
    """

    kind: SweepKind = SweepKind.ALPHA_CURVE
    name: str = ""
    mass: float = 0.1
    width: float = 2.0
    omega0: float = 5.0
    horizon_factor: float = 1.0
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    accelerations: tuple[float, ...] = ()
    accelerations_II: tuple[float, ...] = ()
    squeezing: tuple[float, ...] = ()
    n: tuple[float, ...] = (10.0,)
    points_per_wavelength: float = 32.0
    envelope_cutoff: float = 1e-12
    padding: float = 100.0
    clip_threshold: float = 0.5
    threads: int = 1
    seed: int | None = None
    mc_samples: int = 0
    output: str = "results"

    def __post_init__(self):
        object.__setattr__(self, "kind", SweepKind(self.kind))
        for key in ("alpha_grid", "accelerations", "accelerations_II", "squeezing", "n"):
            object.__setattr__(self, key, tuple(float(v) for v in getattr(self, key)))
        if not self.name:
            object.__setattr__(self, "name", self.kind.value)
        if not self.accelerations:
            object.__setattr__(self, "accelerations", default_accelerations(self.kind, max(self.alpha_grid)))
        if not self.accelerations_II and self.kind.is_2d:
            object.__setattr__(self, "accelerations_II", self.accelerations)
        if not self.squeezing:
            default_r = (3.5,) if self.kind is SweepKind.LOCC_COMPARISON else (1.0, 2.0, 3.0)
            object.__setattr__(self, "squeezing", default_r)
        _check(self)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["kind"] = self.kind.value
        for key, value in out.items():
            if isinstance(value, tuple):
                out[key] = list(value)
        return out

    def mode_parameters(self):
        from .modes import ModeParameters

        return ModeParameters(mass=self.mass, width=self.width, omega0=self.omega0, horizon_factor=self.horizon_factor)

    def resolution(self):
        from .modes import Resolution

        return Resolution(self.points_per_wavelength, self.envelope_cutoff, self.padding)


_TUPLE_KEYS = {"alpha_grid", "accelerations", "accelerations_II", "squeezing", "n"}
_INT_KEYS = {"threads", "mc_samples"}
_FIELDS = {f.name for f in fields(ScenarioConfig)}


def _fail(key: str, msg: str):
    raise ConfigError(f"{key}: {msg}")


def _ascending_unique(key: str, values):
    arr = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(arr)):
        _fail(key, "values must be finite")
    if len(set(arr.tolist())) != arr.size:
        _fail(key, "duplicate values")
    if np.any(np.diff(arr) <= 0):
        _fail(key, "values must be ascending")


def _check(cfg: ScenarioConfig) -> None:
    for key in ("mass", "width", "omega0", "horizon_factor", "points_per_wavelength", "envelope_cutoff", "padding"):
        value = getattr(cfg, key)
        if not math.isfinite(value):
            _fail(key, "must be finite")
    for key in ("mass", "width", "omega0", "horizon_factor"):
        if not getattr(cfg, key) > 0:
            _fail(key, f"must be positive, got {getattr(cfg, key)}")
    if not cfg.omega0 > cfg.mass:
        _fail("omega0", "must exceed mass")
    if cfg.points_per_wavelength < MIN_POINTS_PER_WAVELENGTH:
        _fail("points_per_wavelength", f"must be at least {MIN_POINTS_PER_WAVELENGTH}")
    if not 0 < cfg.envelope_cutoff < 1:
        _fail("envelope_cutoff", "must lie in (0, 1)")
    if cfg.padding < 0:
        _fail("padding", "must be non-negative")
    for key in ("alpha_grid", "accelerations", "accelerations_II", "squeezing", "n"):
        values = getattr(cfg, key)
        if values:
            _ascending_unique(key, values)
    if not cfg.alpha_grid:
        _fail("alpha_grid", "must not be empty")
    a_max = 1.0 / (cfg.horizon_factor * cfg.width)
    if cfg.alpha_grid[0] < MIN_DIRECT_ACCELERATION:
        _fail("alpha_grid", f"nodes must be at least {MIN_DIRECT_ACCELERATION}")
    if cfg.alpha_grid[-1] > a_max * (1 + 1e-12):
        _fail("alpha_grid", f"nodes must not exceed 1/(horizon_factor*width) = {a_max}")
    for key in ("accelerations", "accelerations_II"):
        values = getattr(cfg, key)
        if values and (values[0] < 0 or values[-1] > cfg.alpha_grid[-1]):
            _fail(key, f"values must lie in [0, {cfg.alpha_grid[-1]}] (the alpha_grid span)")
    if cfg.squeezing[0] < 0:
        _fail("squeezing", "values must be non-negative")
    if cfg.kind is SweepKind.LOCC_COMPARISON and cfg.squeezing[0] == 0:
        _fail("squeezing", "the LOCC comparison needs positive squeezing")
    if not cfg.n or cfg.n[0] <= 0:
        _fail("n", "values must be positive")
    if not 0 <= cfg.clip_threshold <= 1:
        _fail("clip_threshold", "must lie in [0, 1]")
    if cfg.threads < 1:
        _fail("threads", "must be at least 1")
    if cfg.mc_samples < 0:
        _fail("mc_samples", "must be non-negative")
    if cfg.mc_samples and cfg.seed is None:
        _fail("seed", "required when mc_samples > 0")
    if cfg.seed is not None and cfg.seed < 0:
        _fail("seed", "must be non-negative")
    if not cfg.name.replace("-", "").replace("_", "").replace(".", "").isalnum():
        _fail("name", "use letters, digits, '-', '_' or '.'")


def _coerce(key: str, value):
    if key == "kind":
        try:
            return SweepKind(value)
        except ValueError:
            _fail(key, f"unknown sweep kind {value!r}; choose from {[k.value for k in SweepKind]}")
    if key in ("name", "output"):
        if not isinstance(value, str):
            _fail(key, "must be a string")
        return value
    if key == "seed":
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(key, "must be an integer")
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(key, "must be an integer")
        return value
    if key in _TUPLE_KEYS:
        items = value if isinstance(value, list) else [value]
        out = []
        for i, item in enumerate(items):
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                _fail(f"{key}[{i}]", f"must be a number, got {item!r}")
            out.append(float(item))
        return tuple(out)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(key, f"must be a number, got {value!r}")
    return float(value)


def config_from_mapping(data: dict | None, overrides: dict | None = None) -> ScenarioConfig:
    data = dict(data or {})
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(map(str, unknown))}")
    return ScenarioConfig(**{key: _coerce(key, value) for key, value in data.items()})


class _UniqueKeyLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node, deep=False):
    seen = set()
    for key_node, _ in node.value:
        key = loader.construct_object(key_node, deep=deep)
        if key in seen:
            mark = key_node.start_mark
            raise ConfigError(f"line {mark.line + 1}, column {mark.column + 1}: duplicate key {key!r}")
        seen.add(key)
    return loader.construct_mapping(node, deep=deep)


_UniqueKeyLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


def validate_config(path, overrides: dict | None = None) -> ScenarioConfig:
    """Read and validate a scenario file; an empty file gives the defaults."""
    text = Path(path).read_text()
    try:
        data = yaml.load(text, Loader=_UniqueKeyLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ConfigError(f"{path}: {where}{exc.problem or exc}") from exc
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping of keys to values")
    try:
        return config_from_mapping(data, overrides)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
