"""Physical constants and SI <-> internal unit conversion.

Internal units set hbar = m_e = 1.  A single length scale then fixes the
time and energy scales.  Magnetic flux is carried internally as the
Aharonov-Bohm phase it produces, e * flux / hbar (radians), so the flux
fraction alpha = flux / (h/e) maps to 2*pi*alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.constants as sc

from .errors import UnitError

__all__ = [
    "PhysicalConstants",
    "UnitScale",
    "CONSTANTS",
    "DIMENSIONS",
    "to_internal",
    "from_internal",
]

DIMENSIONS = ("length", "time", "energy", "momentum", "flux-fraction")


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values in SI.  ``h`` and ``e`` are primary; ``hbar`` and
    ``flux_quantum`` are derived from them so the set stays consistent."""

    e: float = sc.e
    m: float = sc.m_e
    h: float = sc.h
    hbar: float = field(init=False)
    flux_quantum: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "hbar", self.h / (2.0 * math.pi))
        object.__setattr__(self, "flux_quantum", self.h / self.e)


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class UnitScale:
    """Scales of the dimensionless (hbar = m = 1) system.

    Only ``length_scale`` is free; build with :meth:`from_length`.
    """

    length_scale: float
    time_scale: float
    energy_scale: float
    constants: PhysicalConstants = CONSTANTS

    def __post_init__(self):
        for name in ("length_scale", "time_scale", "energy_scale"):
            if not getattr(self, name) > 0:
                raise UnitError(f"{name} must be strictly positive")
        c = self.constants
        if not math.isclose(self.energy_scale, c.hbar / self.time_scale, rel_tol=1e-12):
            raise UnitError("energy_scale must equal hbar / time_scale")
        if not math.isclose(
            self.length_scale**2, c.hbar * self.time_scale / c.m, rel_tol=1e-12
        ):
            raise UnitError("length_scale**2 must equal hbar * time_scale / m")

    @classmethod
    def from_length(cls, length_scale: float, constants: PhysicalConstants = CONSTANTS):
        time_scale = constants.m * length_scale**2 / constants.hbar
        return cls(length_scale, time_scale, constants.hbar / time_scale, constants)

    @property
    def momentum_scale(self) -> float:
        return self.constants.hbar / self.length_scale

    @property
    def flux_scale(self) -> float:
        # one internal flux unit produces one radian of AB phase
        return self.constants.hbar / self.constants.e

    def factor(self, dimension: str) -> float:
        """SI value of one internal unit of ``dimension``."""
        try:
            return {
                "length": self.length_scale,
                "time": self.time_scale,
                "energy": self.energy_scale,
                "momentum": self.momentum_scale,
                "flux-fraction": self.flux_scale,
            }[dimension]
        except KeyError:
            raise UnitError(
                f"unknown dimension tag {dimension!r}; expected one of {DIMENSIONS}"
            ) from None


def to_internal(q, dimension: str, scale: UnitScale):
    """Convert an SI quantity (scalar or array) to internal units."""
    return np.divide(q, scale.factor(dimension))


def from_internal(q, dimension: str, scale: UnitScale):
    """Convert an internal quantity back to SI."""
    return np.multiply(q, scale.factor(dimension))
