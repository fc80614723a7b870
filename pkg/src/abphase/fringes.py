"""Far-field two-slit patterns with an AB phase offset, and shift extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import CONSTANTS
from .errors import LowContrastError, PreconditionError
from .phase import ElectronState

__all__ = [
    "SlitGeometry",
    "FringePattern",
    "two_slit_pattern",
    "fringe_shift_prediction",
    "extract_fringe_shift",
    "envelope_centroid",
    "wrap_fringes",
    "period_smooth",
]

_C = CONSTANTS


@dataclass(frozen=True)
class SlitGeometry:
    slit_spacing_d: float = 1e-6
    slit_width_a: float = 2e-7
    screen_distance_s: float = 1.0
    screen_half_extent: float = 1e-4
    sample_count: int = 4096

    def __post_init__(self):
        if not 0 < self.slit_width_a < self.slit_spacing_d:
            raise PreconditionError("slit geometry needs 0 < a < d")
        if not self.screen_distance_s > 0 or not self.screen_half_extent > 0:
            raise PreconditionError("screen distance and extent must be positive")
        if self.sample_count < 16:
            raise PreconditionError("need at least 16 screen samples")

    @property
    def small_angle_violated(self) -> bool:
        return self.slit_spacing_d / self.screen_distance_s > 1e-2

    def fringe_spacing(self, state: ElectronState) -> float:
        return state.wavelength_lambda_o * self.screen_distance_s / self.slit_spacing_d


@dataclass(frozen=True, eq=False)
class FringePattern:
    screen_positions: np.ndarray
    intensity: np.ndarray
    fringe_spacing_hint: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        y = np.asarray(self.screen_positions, dtype=float)
        i = np.asarray(self.intensity, dtype=float)
        if y.shape != i.shape or y.ndim != 1 or len(y) < 16:
            raise PreconditionError("pattern needs equal-length arrays of >= 16 samples")
        if np.any(i < 0):
            raise PreconditionError("intensity must be non-negative")
        if not self.fringe_spacing_hint > 0:
            raise PreconditionError("fringe spacing hint must be positive")
        object.__setattr__(self, "screen_positions", y)
        object.__setattr__(self, "intensity", i)


def _raw_intensity(y, geom: SlitGeometry, lam: float, delta_phi: float):
    scale = lam * geom.screen_distance_s
    envelope = np.sinc(geom.slit_width_a * y / scale) ** 2
    return envelope * np.cos(math.pi * geom.slit_spacing_d * y / scale - 0.5 * delta_phi) ** 2


def two_slit_pattern(geom: SlitGeometry, state: ElectronState, delta_phi: float) -> FringePattern:
    """Fraunhofer pattern sinc^2 envelope times cos^2 fringes offset by ``delta_phi``.

    Normalized so the zero-phase pattern peaks at 1.
    """
    y = np.linspace(-geom.screen_half_extent, geom.screen_half_extent, geom.sample_count)
    lam = state.wavelength_lambda_o
    peak = _raw_intensity(y, geom, lam, 0.0).max()
    return FringePattern(
        y,
        _raw_intensity(y, geom, lam, delta_phi) / peak,
        geom.fringe_spacing(state),
        {
            "source": "two_slit_pattern",
            "delta_phi_rad": float(delta_phi),
            "wavelength_m": lam,
            "slit_spacing_m": geom.slit_spacing_d,
            "slit_width_m": geom.slit_width_a,
            "screen_distance_m": geom.screen_distance_s,
        },
    )


def fringe_shift_prediction(geom: SlitGeometry, state: ElectronState, flux_phi_b: float) -> float:
    """Screen displacement s (lambda_o / d) (e / h) flux, in meters."""
    return (
        geom.screen_distance_s
        * state.wavelength_lambda_o
        / geom.slit_spacing_d
        * flux_phi_b
        / _C.flux_quantum
    )


def wrap_fringes(x, center: float = 0.0):
    """Map a shift in fringe units into [center - 1/2, center + 1/2)."""
    return center + np.mod(np.asarray(x) - center + 0.5, 1.0) - 0.5


def period_smooth(values: np.ndarray, dy: float, period: float) -> np.ndarray:
    """Average over one exact ``period`` (applied twice, a triangle of width
    2 periods) so every harmonic of the fringe carrier is removed."""
    n = len(values)
    padded = np.pad(values, n, mode="reflect")
    f = np.fft.rfftfreq(len(padded), dy)
    # continuous boxcar of width P has transfer sinc(f P); zero at f = k / P
    smoothed = np.fft.irfft(np.fft.rfft(padded) * np.sinc(f * period) ** 2, len(padded))
    return smoothed[n : 2 * n]


def _carrier(pattern: FringePattern, window: np.ndarray) -> complex:
    y = pattern.screen_positions
    period = pattern.fringe_spacing_hint
    detrended = pattern.intensity - period_smooth(pattern.intensity, y[1] - y[0], period)
    return complex(np.sum(detrended * window * np.exp(-2j * math.pi * y / period)))


def extract_fringe_shift(
    pattern: FringePattern,
    reference: FringePattern,
    branch_center: float = 0.0,
    min_contrast: float = 1e-3,
) -> float:
    """Sub-sample shift of ``pattern`` relative to ``reference`` (meters).

    Uses the phase of the Fourier component at the carrier frequency
    1 / fringe_spacing_hint after removing the one-period running mean and
    weighting by the smoothed reference envelope times a Hann taper.
    Positive means the fringes moved toward +y.  Integer-fringe shifts are
    invisible, so the result lies in [c - 1/2, c + 1/2) fringes with
    c = ``branch_center``.
    """
    y = pattern.screen_positions
    if y.shape != reference.screen_positions.shape or not np.array_equal(
        y, reference.screen_positions
    ):
        raise PreconditionError("patterns must share screen positions")
    if not math.isclose(pattern.fringe_spacing_hint, reference.fringe_spacing_hint, rel_tol=1e-12):
        raise PreconditionError("patterns must share the fringe spacing hint")
    if not np.all(np.diff(y) > 0) or not np.allclose(np.diff(y), y[1] - y[0], rtol=1e-6):
        raise PreconditionError("screen positions must be uniformly increasing")

    period = pattern.fringe_spacing_hint
    envelope = np.clip(period_smooth(reference.intensity, y[1] - y[0], period), 0.0, None)
    window = envelope * np.hanning(len(y))

    c_ref = _carrier(reference, window)
    c_pat = _carrier(pattern, window)
    norm = float(np.sum(envelope * window))
    if norm <= 0 or min(abs(c_ref), abs(c_pat)) < min_contrast * norm:
        raise LowContrastError("fringe carrier below the contrast floor")
    # I ~ 1 + cos(2 pi y / P - dphi): the carrier picks up exp(-i dphi)
    fringes = -np.angle(c_pat * np.conj(c_ref)) / (2.0 * math.pi)
    return float(wrap_fringes(fringes, branch_center) * period)


def envelope_centroid(pattern: FringePattern) -> float:
    """Centroid of the intensity smoothed over one fringe period.

    Samples within two periods of either screen edge are dropped because
    the smoothing there sees the padding.
    """
    y = pattern.screen_positions
    period = pattern.fringe_spacing_hint
    env = period_smooth(pattern.intensity, y[1] - y[0], period)
    inner = (y >= y[0] + 2 * period) & (y <= y[-1] - 2 * period)
    if inner.sum() < 2:
        raise PreconditionError("screen narrower than five fringe periods")
    return float(np.sum(y[inner] * env[inner]) / np.sum(env[inner]))
