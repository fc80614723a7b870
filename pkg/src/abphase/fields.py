"""Vector potential and magnetic field of an ideal, infinitely long solenoid.

Sign convention: positive flux means B points out of the page (+z), and the
symmetric-gauge potential circulates counter-clockwise.  Directly below the
solenoid A therefore points along +x.

Two gauges are provided.  ``symmetric-azimuthal`` is the textbook
A_theta = flux / (2 pi r) outside, flux r / (2 pi R^2) inside.
``string-offset`` is obtained from it with chi = -(flux / 2 pi) * theta_s,
where theta_s in [0, 2 pi) is the angle measured counter-clockwise from a
ray (the Dirac string).  Off the ray its regular part vanishes outside the
solenoid; the enclosed flux is carried by a delta-function sheet on the ray,
which path integrals pick up as +flux per counter-clockwise crossing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SingularPointError

__all__ = [
    "SolenoidSpec",
    "GaugeChoice",
    "GaugeFunction",
    "CurlSample",
    "SYMMETRIC",
    "STRING",
    "vector_potential",
    "potential_field",
    "magnetic_field",
    "numerical_curl",
    "apply_gauge",
    "string_gauge_function",
    "branch_angle",
    "on_string",
]

SYMMETRIC = "symmetric-azimuthal"
STRING = "string-offset"

# relative distance (in units of R) below which a point counts as lying on a ray
_RAY_TOL = 1e-12


@dataclass(frozen=True)
class SolenoidSpec:
    center: tuple = (0.0, 0.0)
    radius_R: float = 5e-6
    flux_phi_b: float = 0.0

    def __post_init__(self):
        if not self.radius_R > 0:
            raise ValueError("solenoid radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @property
    def A_theta(self) -> float:
        """Azimuthal potential at the outer radius, flux / (2 pi R)."""
        return self.flux_phi_b / (2.0 * math.pi * self.radius_R)

    @property
    def interior_field(self) -> float:
        return self.flux_phi_b / (math.pi * self.radius_R**2)


@dataclass(frozen=True)
class GaugeChoice:
    kind: str = SYMMETRIC
    string_direction: tuple = (1.0, 0.0)

    def __post_init__(self):
        if self.kind not in (SYMMETRIC, STRING):
            raise ValueError(f"unknown gauge kind {self.kind!r}")
        u = np.asarray(self.string_direction, dtype=float)
        norm = float(np.hypot(*u))
        if norm == 0:
            raise ValueError("string_direction must be non-zero")
        object.__setattr__(self, "string_direction", (u[0] / norm, u[1] / norm))

    @classmethod
    def symmetric(cls):
        return cls(SYMMETRIC)

    @classmethod
    def string(cls, angle: float = 0.0):
        """String-offset gauge with the string at ``angle`` radians from +x."""
        return cls(STRING, (math.cos(angle), math.sin(angle)))

    @property
    def string_angle(self) -> float:
        return math.atan2(self.string_direction[1], self.string_direction[0])


@dataclass(frozen=True)
class GaugeFunction:
    """Scalar gauge function chi (weber) with its non-smooth set.

    ``chi`` maps an (..., 2) array of points to (...) values.
    ``singular(points, dist)`` is True where a point lies within ``dist`` of
    the set on which chi is not smooth.
    """

    chi: Callable[[np.ndarray], np.ndarray]
    singular: Callable[[np.ndarray, float], np.ndarray] = field(
        default=lambda p, dist: np.zeros(np.shape(p)[:-1], dtype=bool)
    )
    description: str = ""


@dataclass(frozen=True)
class CurlSample:
    value: float
    straddles_boundary: bool = False


def _relative(spec: SolenoidSpec, point) -> np.ndarray:
    return np.asarray(point, dtype=float) - np.asarray(spec.center)


def branch_angle(point, center, direction) -> np.ndarray:
    """Angle in [0, 2 pi) measured counter-clockwise from ``direction``."""
    d = np.asarray(point, dtype=float) - np.asarray(center, dtype=float)
    ux, uy = direction
    along = d[..., 0] * ux + d[..., 1] * uy
    across = ux * d[..., 1] - uy * d[..., 0]
    return np.mod(np.arctan2(across, along), 2.0 * math.pi)


def on_string(point, center, direction, scale: float, tol: float = _RAY_TOL) -> np.ndarray:
    """True for points on the closed ray from ``center`` along ``direction``."""
    d = np.asarray(point, dtype=float) - np.asarray(center, dtype=float)
    ux, uy = direction
    along = d[..., 0] * ux + d[..., 1] * uy
    across = ux * d[..., 1] - uy * d[..., 0]
    return (np.abs(across) <= tol * scale) & (along >= -tol * scale)


def vector_potential(spec: SolenoidSpec, gauge: GaugeChoice, point) -> np.ndarray:
    """A at ``point`` (meters), in weber/meter.  Accepts (..., 2) arrays.

    Raises
    ------
    SingularPointError
        For the string-offset gauge evaluated on its string (center included).
    """
    d = _relative(spec, point)
    x, y = d[..., 0], d[..., 1]
    r2 = x * x + y * y
    R = spec.radius_R
    pref = spec.flux_phi_b / (2.0 * math.pi)

    if gauge.kind == STRING:
        if np.any(on_string(point, spec.center, gauge.string_direction, R)):
            raise SingularPointError("string-offset gauge evaluated on its string")
        # regular part: (flux/2pi) (r/R^2 - 1/r) inside, zero outside
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(r2 < R * R, 1.0 / (R * R) - 1.0 / r2, 0.0)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(r2 < R * R, 1.0 / (R * R), 1.0 / r2)
        inv = np.where(r2 == 0.0, 0.0, inv)
    # A_theta/r times (-y, x) gives the azimuthal vector of magnitude A_theta
    return np.stack((-pref * inv * y, pref * inv * x), axis=-1)


def potential_field(spec: SolenoidSpec, gauge: GaugeChoice) -> Callable:
    """Closure ``point -> A`` usable with :func:`apply_gauge`."""
    return lambda p: vector_potential(spec, gauge, p)


def numerical_curl(a_field: Callable, point, step: float) -> float:
    """z component of curl A from a second-order central-difference stencil."""
    p = np.asarray(point, dtype=float)
    ex = np.array([step, 0.0])
    ey = np.array([0.0, step])
    stencil = np.stack((p + ex, p - ex, p + ey, p - ey))
    a = a_field(stencil)
    day_dx = (a[0, 1] - a[1, 1]) / (2.0 * step)
    dax_dy = (a[2, 0] - a[3, 0]) / (2.0 * step)
    return float(day_dx - dax_dy)


def magnetic_field(
    spec: SolenoidSpec, gauge: GaugeChoice, point, step: float | None = None
) -> CurlSample:
    """B_z (tesla) as the numerical curl of :func:`vector_potential`.

    ``step`` defaults to 1e-4 R.  When the stencil straddles r = R the value
    is returned with ``straddles_boundary`` set.
    """
    h = 1e-4 * spec.radius_R if step is None else step
    p = np.asarray(point, dtype=float)
    value = numerical_curl(potential_field(spec, gauge), p, h)
    r = np.hypot(*_relative(spec, p))
    return CurlSample(value, bool(abs(r - spec.radius_R) <= math.sqrt(2.0) * h))


def string_gauge_function(spec: SolenoidSpec, direction) -> GaugeFunction:
    """chi taking the symmetric gauge to the string-offset gauge along ``direction``."""
    u = GaugeChoice(STRING, tuple(direction)).string_direction
    pref = -spec.flux_phi_b / (2.0 * math.pi)
    return GaugeFunction(
        chi=lambda p: pref * branch_angle(p, spec.center, u),
        singular=lambda p, dist: on_string(p, spec.center, u, dist, tol=1.0),
        description=f"string gauge along {u}",
    )


def apply_gauge(a_field: Callable, chi: GaugeFunction, step: float = 1e-9) -> Callable:
    """Return the field ``A + grad chi``; grad chi by central differences.

    The returned closure raises :class:`SingularPointError` if a stencil
    would touch chi's non-smooth set.
    """
    offsets = np.array([[step, 0.0], [-step, 0.0], [0.0, step], [0.0, -step]])

    def gauged(point):
        p = np.asarray(point, dtype=float)
        if np.any(chi.singular(p, 2.0 * step)):
            raise SingularPointError("gauge function queried on its singular set")
        c = chi.chi(p[..., None, :] + offsets)
        grad = np.stack(
            ((c[..., 0] - c[..., 1]) / (2 * step), (c[..., 2] - c[..., 3]) / (2 * step)),
            axis=-1,
        )
        return a_field(p) + grad

    return gauged
