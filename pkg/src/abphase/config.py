"""Flat ``key = value unit`` experiment configuration with mandatory units.

Example::

    # paper scenario
    voltage = 10 kV
    radius  = 5 um
    flux    = 1 flux_quantum

Physical quantities must carry a unit.  Counts, words and dimensionless
numbers must not.  Unknown keys are rejected.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace

from .constants import CONSTANTS

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "load_config", "format_config", "KINDS"]

KINDS = ("phase", "loop", "fringes", "simulate", "gauge-check", "dispersion-check", "accept")


class ConfigError(ValueError):
    """Malformed or invalid configuration text."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


_UNITS = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "μm": 1e-6, "nm": 1e-9, "pm": 1e-12},
    "voltage": {"V": 1.0, "kV": 1e3, "MV": 1e6},
    "flux": {"Wb": 1.0, "flux_quantum": CONSTANTS.flux_quantum},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
}

# key -> (kind, canonical unit written back by format_config)
_SCHEMA = {
    "voltage": ("voltage", "V"),
    "flux": ("flux", "Wb"),
    "radius": ("length", "m"),
    "slit_spacing": ("length", "m"),
    "slit_width": ("length", "m"),
    "screen_distance": ("length", "m"),
    "screen_half_extent": ("length", "m"),
    "samples": ("int", None),
    "loop_radius": ("length", "m"),
    "loop_center_x": ("length", "m"),
    "loop_center_y": ("length", "m"),
    "loop_shape": ("word", None),
    "gauge": ("word", None),
    "string_angle": ("angle", "rad"),
    "string_angles": ("angle-list", "rad"),
    "momentum_factor": ("number", None),
    "momentum_factors": ("number-list", None),
    "grid": ("int", None),
    "precision": ("word", None),
    "quad_rtol": ("number", None),
}

_WORDS = {
    "loop_shape": ("circle", "square"),
    "gauge": ("symmetric", "string"),
    "precision": ("single", "double"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved configuration in SI.  Defaults are the 10 kV, R = 5 um,
    one-flux-quantum scenario."""

    voltage: float = 10e3
    flux: float = CONSTANTS.flux_quantum
    radius: float = 5e-6
    slit_spacing: float = 1e-6
    slit_width: float = 2e-7
    screen_distance: float = 1.0
    screen_half_extent: float = 2.5e-4
    samples: int = 8192
    loop_radius: float = 1e-5
    loop_center_x: float = 0.0
    loop_center_y: float = 0.0
    loop_shape: str = "circle"
    gauge: str = "symmetric"
    string_angle: float = 0.0
    string_angles: tuple = tuple(math.radians(a) for a in (-90, -45, 0, 45, 90))
    momentum_factor: float = 1.0
    momentum_factors: tuple = (0.25, 0.5, 1.0)
    # grid points per side at momentum_factor 1; scaled with the momentum
    grid: int = 1024
    precision: str = "single"
    quad_rtol: float = 1e-10

    @property
    def flux_fraction(self) -> float:
        return self.flux / CONSTANTS.flux_quantum

    def echo(self) -> dict:
        return {f.name: (list(getattr(self, f.name)) if isinstance(getattr(self, f.name), tuple)
                         else getattr(self, f.name)) for f in fields(self)}


_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_LINE = re.compile(r"^\s*(?P<key>[A-Za-z_][\w-]*)\s*=\s*(?P<value>.*?)\s*$")


def _number(text, line, col):
    if not re.fullmatch(_NUMBER, text):
        raise ConfigError(f"expected a number, got {text!r}", line, col)
    return float(text)


def _quantity(text, kind, key, line, col):
    m = re.fullmatch(rf"(?P<num>{_NUMBER})\s*(?P<unit>\S*)", text)
    if not m:
        raise ConfigError(f"cannot parse quantity {text!r} for {key}", line, col)
    unit = m["unit"]
    if not unit:
        raise ConfigError(f"{key} needs a unit (one of {sorted(_UNITS[kind])})", line, col)
    if unit not in _UNITS[kind]:
        ucol = col + m.start("unit")
        raise ConfigError(
            f"invalid unit {unit!r} for {key}; expected one of {sorted(_UNITS[kind])}", line, ucol
        )
    return float(m["num"]) * _UNITS[kind][unit]


def _parse_value(key, text, line, col):
    kind, _ = _SCHEMA[key]
    if kind in _UNITS:
        return _quantity(text, kind, key, line, col)
    if kind == "int":
        if not re.fullmatch(r"[-+]?\d+", text):
            raise ConfigError(f"{key} takes a plain integer, got {text!r}", line, col)
        return int(text)
    if kind == "number":
        return _number(text, line, col)
    if kind == "word":
        if text not in _WORDS[key]:
            raise ConfigError(f"{key} must be one of {_WORDS[key]}, got {text!r}", line, col)
        return text
    if kind == "number-list":
        return tuple(_number(part.strip(), line, col) for part in text.split(","))
    if kind == "angle-list":
        m = re.fullmatch(r"(?P<nums>.*?)\s+(?P<unit>\S+)", text)
        if not m:
            raise ConfigError(f"{key} needs a unit after the list", line, col)
        if m["unit"] not in _UNITS["angle"]:
            raise ConfigError(
                f"invalid unit {m['unit']!r} for {key}", line, col + m.start("unit")
            )
        factor = _UNITS["angle"][m["unit"]]
        return tuple(_number(p.strip(), line, col) * factor for p in m["nums"].split(","))
    raise AssertionError(kind)


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse configuration text on top of ``base`` (defaults if omitted)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if not m:
            raise ConfigError("expected 'key = value'", lineno, 1)
        key = m["key"]
        if key not in _SCHEMA:
            raise ConfigError(f"unknown key {key!r}", lineno, m.start("key") + 1)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, m.start("key") + 1)
        values[key] = _parse_value(key, m["value"], lineno, m.start("value") + 1)
    cfg = replace(base or ExperimentConfig(), **values)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig):
    for name in ("voltage", "radius", "slit_spacing", "slit_width", "screen_distance",
                 "screen_half_extent", "loop_radius"):
        if not getattr(cfg, name) > 0:
            raise ConfigError(f"{name} must be positive")
    if not cfg.slit_width < cfg.slit_spacing:
        raise ConfigError("slit_width must be smaller than slit_spacing")
    if cfg.samples < 16:
        raise ConfigError("samples must be >= 16")
    if cfg.grid < 16 or cfg.grid & (cfg.grid - 1):
        raise ConfigError("grid must be a power of two >= 16")
    if not cfg.momentum_factor > 0 or not cfg.quad_rtol > 0:
        raise ConfigError("momentum_factor and quad_rtol must be positive")
    if not cfg.momentum_factors or any(f <= 0 for f in cfg.momentum_factors):
        raise ConfigError("momentum_factors must be positive")


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(cfg: ExperimentConfig) -> str:
    """Effective configuration text; parsing it gives back ``cfg`` exactly."""
    out = []
    for f in fields(cfg):
        kind, unit = _SCHEMA[f.name]
        v = getattr(cfg, f.name)
        if kind in _UNITS:
            out.append(f"{f.name} = {v!r} {unit}")
        elif kind == "angle-list":
            out.append(f"{f.name} = {', '.join(repr(a) for a in v)} {unit}")
        elif kind == "number":
            out.append(f"{f.name} = {float(v)!r}")
        elif kind == "number-list":
            out.append(f"{f.name} = {', '.join(repr(float(a)) for a in v)}")
        else:
            out.append(f"{f.name} = {v}")
    return "\n".join(out) + "\n"
