"""Run configuration: YAML file plus command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from ..algebra import ExactScalar, FieldMismatchError, Poly2, parse_exact
from ..flow import FlowOptions
from ..pwfield import PRESETS, PiecewiseKolmogorovSystem, PolyVectorField, get_preset


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    scenario: str | None = None
    system: dict | None = None
    field_extension: int | None = None
    order: int = 7
    int_tol: float = 1e-12
    loc_tol: float = 1e-13
    cycle_tol: float = 1e-10
    unfold: int | None = None
    eps: tuple[float, float, float] = (1e-2, 1e-4, 1e-6)
    grid_n: int = 60
    r_range: tuple[float, float] = (1e-7, 0.15)
    out: str = "out"
    bbox: tuple[float, float, float, float] | None = None
    duration: float = 60.0
    start: tuple[float, float] | None = None
    seeds: tuple[tuple[float, float], ...] | None = None
    corrupt: dict | None = None

    def __post_init__(self):
        for name in ("int_tol", "loc_tol", "cycle_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.order < 2:
            raise ConfigError("order K must be at least 2")
        if self.unfold is not None and not 0 <= self.unfold <= 3:
            raise ConfigError("--unfold must be 0, 1, 2 or 3")
        if self.scenario is None and self.system is None:
            raise ConfigError("give --scenario or an inline system in the config file")
        if self.scenario is not None and self.scenario not in PRESETS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; known: {', '.join(sorted(PRESETS))}")

    @property
    def flow_options(self) -> FlowOptions:
        kw = {"int_tol": self.int_tol, "loc_tol": self.loc_tol, "cycle_tol": self.cycle_tol}
        return FlowOptions(**kw)


_KEYS = {
    "scenario",
    "system",
    "field_extension",
    "order",
    "tolerances",
    "experiment",
    "out",
    "bbox",
    "duration",
    "start",
    "seeds",
    "corrupt",
}


def load_config_file(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _float_tuple(v, n: int, name: str) -> tuple[float, ...]:
    if isinstance(v, str):
        v = v.split(",")
    try:
        out = tuple(float(x) for x in v)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} needs {n} numbers") from None
    if len(out) != n:
        raise ConfigError(f"{name} needs {n} numbers, got {len(out)}")
    return out


def config_from(data: dict, overrides: dict) -> RunConfig:
    """Merge a config mapping with flag overrides (flags win)."""
    kw: dict = {}
    for key in ("scenario", "system", "field_extension", "order", "out", "duration", "corrupt"):
        if key in data:
            kw[key] = data[key]
    tol = data.get("tolerances") or {}
    for key in ("int_tol", "loc_tol", "cycle_tol"):
        if key in tol:
            kw[key] = float(tol[key])
    exp = data.get("experiment") or {}
    if "eps" in exp:
        kw["eps"] = _float_tuple(exp["eps"], 3, "experiment.eps")
    if "grid_n" in exp:
        kw["grid_n"] = int(exp["grid_n"])
    if "r_range" in exp:
        kw["r_range"] = _float_tuple(exp["r_range"], 2, "experiment.r_range")
    if "unfold" in exp:
        kw["unfold"] = int(exp["unfold"])
    if "bbox" in data:
        kw["bbox"] = _float_tuple(data["bbox"], 4, "bbox")
    if "start" in data:
        kw["start"] = _float_tuple(data["start"], 2, "start")
    if "seeds" in data:
        kw["seeds"] = tuple(_float_tuple(s, 2, "seed") for s in data["seeds"])
    eps = list(kw.get("eps", RunConfig.eps))
    for i in range(3):
        v = overrides.pop(f"eps{i + 1}", None)
        if v is not None:
            eps[i] = v
    kw["eps"] = tuple(eps)
    for key, v in overrides.items():
        if v is None:
            continue
        if key == "bbox":
            v = _float_tuple(v, 4, "--bbox")
        if key == "start":
            v = _float_tuple(v, 2, "--start")
        kw[key] = v
    if kw.get("scenario") is not None and "system" in kw and "scenario" in overrides:
        kw.pop("system")
    try:
        return RunConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


# -- systems ---------------------------------------------------------------------


def _poly(rows, where: str, d: int | None) -> Poly2:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{where}: coefficients must be a list of rows (rows[i][j] multiplies x^i y^j)")
    try:
        p = Poly2.from_rows([[parse_exact(str(c)) for c in row] for row in rows])
    except (ValueError, FieldMismatchError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    ext = p.field_extension()
    if ext and d is not None and ext != d:
        raise ConfigError(f"field-extension mismatch in {where}: uses sqrt({ext}), config says sqrt({d})")
    return p


def _zone(spec, name: str, d) -> PolyVectorField:
    if not isinstance(spec, dict) or "P" not in spec or "Q" not in spec:
        raise ConfigError(f"zone {name} needs P and Q coefficient tables")
    P, Q = _poly(spec["P"], f"{name}.P", d), _poly(spec["Q"], f"{name}.Q", d)
    kolmo = P.divisible_by_x() and Q.divisible_by_y()
    try:
        return PolyVectorField(P, Q, kolmogorov=kolmo)
    except FieldMismatchError as exc:
        raise ConfigError(str(exc)) from None


@dataclass(frozen=True)
class ResolvedSystem:
    name: str
    system: PiecewiseKolmogorovSystem | PolyVectorField
    focus: tuple[ExactScalar, ExactScalar] | None
    preset: object = None
    notes: list = field(default_factory=list)


def resolve_system(cfg: RunConfig) -> ResolvedSystem:
    d = cfg.field_extension
    if cfg.scenario is not None:
        preset = get_preset(cfg.scenario)
        sys = preset.system()
        if d is not None:
            fields = [preset.zone1] + ([preset.zone2] if preset.zone2 is not None else [])
            for f in fields:
                ext = f.field_extension
                if ext and ext != d:
                    raise ConfigError(f"field-extension mismatch: scenario uses sqrt({ext}), config says sqrt({d})")
        return ResolvedSystem(preset.name, sys, preset.focus, preset)
    spec = cfg.system
    if not isinstance(spec, dict):
        raise ConfigError("inline system must be a mapping")
    focus = None
    if "focus" in spec:
        try:
            focus = tuple(parse_exact(str(v)) for v in spec["focus"])
        except ValueError as exc:
            raise ConfigError(f"focus: {exc}") from None
    if "Z2" in spec:
        sigma = parse_exact(str(spec.get("sigma_x", 1)))
        sys = PiecewiseKolmogorovSystem(_zone(spec.get("Z1"), "Z1", d), _zone(spec["Z2"], "Z2", d), sigma)
        if sys.Z1.field_extension and sys.Z2.field_extension and sys.Z1.field_extension != sys.Z2.field_extension:
            raise ConfigError("field-extension mismatch between the zones")
    else:
        sys = _zone(spec.get("Z1", spec), "Z1", d)
    return ResolvedSystem(spec.get("name", "inline"), sys, focus)


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **kw)
