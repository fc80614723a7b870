"""De Broglie wavelength modulation by A and the resulting AB phase.

All formulas take the electron coupling as ``p = p_o - e A`` with ``e > 0``.
Scalar relations use the component of A along the propagation direction.

The phase difference between the two partial waves is reported positive for
positive flux: the wave passing on the side where A opposes its motion (the
upper path for a beam travelling +x) has the larger refractive index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS
from .errors import DegenerateStateError, PreconditionError, SingularPointError
from .fields import STRING, GaugeChoice, SolenoidSpec, on_string, vector_potential
from .quadrature import adaptive_gauss_legendre

__all__ = [
    "ElectronState",
    "PolylinePath",
    "CircularPath",
    "PhasePlateModel",
    "circle_polyline",
    "mechanical_momentum",
    "de_broglie_wavelength",
    "quantum_refractive_index",
    "phase_plate_model",
    "phase_plate_delta_phi",
    "delta_n_q",
    "line_integral",
    "ab_phase_loop",
    "path_phase",
    "winding_number",
]

TWO_PI = 2.0 * math.pi
_C = CONSTANTS


@dataclass(frozen=True)
class ElectronState:
    """Incident (non-relativistic) electron.  Build with one of the ``from_*``
    constructors so the four fields stay consistent."""

    energy_E_o: float
    momentum_p_o: float
    wavelength_lambda_o: float
    wavenumber_k_o: float

    @classmethod
    def from_momentum(cls, p_o: float):
        if not p_o > 0:
            raise DegenerateStateError("initial momentum must be positive")
        lam = _C.h / p_o
        return cls(p_o * p_o / (2.0 * _C.m), p_o, lam, TWO_PI / lam)

    @classmethod
    def from_energy(cls, energy: float):
        if not energy > 0:
            raise DegenerateStateError("initial energy must be positive")
        return cls.from_momentum(math.sqrt(2.0 * _C.m * energy))

    @classmethod
    def from_voltage(cls, volts: float):
        """Electron accelerated from rest through ``volts`` (E_o = e V_o)."""
        return cls.from_energy(_C.e * volts)

    @classmethod
    def from_wavelength(cls, wavelength: float):
        return cls.from_momentum(_C.h / wavelength)


@dataclass(frozen=True)
class PolylinePath:
    points: tuple
    closed: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise PreconditionError("a path needs at least two 2D points")
        seg = np.diff(np.vstack((pts, pts[:1])) if self.closed else pts, axis=0)
        if np.any(np.all(seg == 0.0, axis=1)):
            raise PreconditionError("consecutive path points must be distinct")
        object.__setattr__(self, "points", tuple(map(tuple, pts)))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points)

    def segments(self):
        pts = self.array
        if self.closed:
            pts = np.vstack((pts, pts[:1]))
        return list(zip(pts[:-1], pts[1:]))

    def reversed(self) -> "PolylinePath":
        return PolylinePath(self.points[::-1], self.closed)


@dataclass(frozen=True)
class CircularPath:
    """Analytic arc ``center + radius * (cos t, sin t)`` for t from
    ``start_angle`` to ``start_angle + sweep``.  Closed when the sweep is a
    non-zero multiple of 2 pi."""

    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    start_angle: float = 0.0
    sweep: float = TWO_PI

    def __post_init__(self):
        if not self.radius > 0 or self.sweep == 0:
            raise PreconditionError("arc needs positive radius and non-zero sweep")

    @property
    def closed(self) -> bool:
        turns = self.sweep / TWO_PI
        return abs(turns - round(turns)) < 1e-12 and round(turns) != 0

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack(
            (self.center[0] + self.radius * np.cos(t), self.center[1] + self.radius * np.sin(t)),
            axis=-1,
        )

    def reversed(self) -> "CircularPath":
        return CircularPath(self.center, self.radius, self.start_angle + self.sweep, -self.sweep)


def circle_polyline(center, radius: float, segments: int = 256, clockwise: bool = False):
    """Closed regular polygon inscribed in a circle."""
    t = np.linspace(0.0, TWO_PI, segments, endpoint=False)
    if clockwise:
        t = -t
    pts = np.column_stack((center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)))
    return PolylinePath(pts, closed=True)


@dataclass(frozen=True)
class PhasePlateModel:
    """Index-plate picture of the interaction on either side of the solenoid.

    ``delta_n_q`` is ``qri_upper - qri_lower``: the upper partial wave sees A
    anti-parallel to its motion and has the larger index.
    """

    interaction_length_L_i: float
    plate_thickness_t_i: float
    qri_upper: float
    qri_lower: float
    delta_n_q: float

    def delta_phi(self, wavelength: float) -> float:
        """Optical-path phase difference 2 pi t_i dn / lambda_o."""
        return TWO_PI / wavelength * self.plate_thickness_t_i * self.delta_n_q


# --- local wavelength -----------------------------------------------------------

def _parallel(a_vec, direction) -> float:
    u = np.asarray(direction, dtype=float)
    if not math.isclose(float(np.hypot(*u)), 1.0, rel_tol=1e-12):
        raise PreconditionError("direction must be a unit vector")
    return float(np.dot(np.asarray(a_vec, dtype=float), u))


def mechanical_momentum(state: ElectronState, a_vec, direction=(1.0, 0.0)) -> float:
    """|p_o - e A_par| with A_par the component of ``a_vec`` along ``direction``."""
    return abs(state.momentum_p_o - _C.e * _parallel(a_vec, direction))


def de_broglie_wavelength(state: ElectronState, a_vec, direction=(1.0, 0.0)) -> float:
    p = mechanical_momentum(state, a_vec, direction)
    if p == 0.0:
        raise DegenerateStateError("mechanical momentum is zero")
    return _C.h / p


def quantum_refractive_index(state: ElectronState, a_vec, direction=(1.0, 0.0)) -> float:
    """lambda_o / lambda(A), equivalently v / v_o."""
    p = mechanical_momentum(state, a_vec, direction)
    if p == 0.0:
        raise DegenerateStateError("mechanical momentum is zero")
    return p / state.momentum_p_o


def delta_n_q(state: ElectronState, a_upper: float, a_lower: float) -> float:
    """Index difference e (A_lower - A_upper) / p_o from parallel components."""
    return _C.e * (a_lower - a_upper) / state.momentum_p_o


def phase_plate_model(state: ElectronState, spec: SolenoidSpec) -> PhasePlateModel:
    """Plates of thickness pi R on each side, tangent potential A_theta(R)."""
    L_i = TWO_PI * spec.radius_R
    a = spec.A_theta
    beam = (1.0, 0.0)
    return PhasePlateModel(
        interaction_length_L_i=L_i,
        plate_thickness_t_i=L_i / 2.0,
        qri_upper=quantum_refractive_index(state, (-a, 0.0), beam),
        qri_lower=quantum_refractive_index(state, (a, 0.0), beam),
        delta_n_q=delta_n_q(state, -a, a),
    )


def phase_plate_delta_phi(state: ElectronState | None, spec: SolenoidSpec) -> float:
    """(e / hbar) L_i A_theta with L_i = 2 pi R.  Independent of ``state``."""
    L_i = TWO_PI * spec.radius_R
    return _C.e / _C.hbar * L_i * spec.A_theta


# --- line integrals ---------------------------------------------------------------

def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _segment_breaks(a, b, spec: SolenoidSpec, gauge: GaugeChoice):
    """Parameters in (0, 1) where the integrand kinks, plus the signed string
    crossings as (t, +1 counter-clockwise / -1 clockwise)."""
    c = np.asarray(spec.center)
    v = b - a
    w = a - c
    breaks = []
    # r = R circle: |w + t v|^2 = R^2
    qa = float(v @ v)
    qb = 2.0 * float(w @ v)
    qc = float(w @ w) - spec.radius_R**2
    disc = qb * qb - 4 * qa * qc
    if disc > 0:
        sq = math.sqrt(disc)
        breaks += [t for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)) if 0 < t < 1]
    crossings = []
    if gauge.kind == STRING:
        u = gauge.string_direction
        if np.any(on_string(np.stack((a, b)), c, u, spec.radius_R)):
            raise SingularPointError("path vertex lies on the string")
        cv = _cross(u, v)
        if cv != 0.0:
            t = -_cross(u, w) / cv
            if 0 < t < 1 and float(np.dot(u, w + t * v)) > 0:
                crossings.append((t, 1 if cv > 0 else -1))
                breaks.append(t)
        # a segment collinear with the string either overlaps it (caught above
        # through its vertices or below) or misses it
        elif _cross(u, w) == 0.0 and max(np.dot(u, w), np.dot(u, w + v)) > 0:
            raise SingularPointError("path runs along the string")
        seg_d = np.abs(_cross(v, -w)) / math.sqrt(qa)
        tc = -float(w @ v) / qa
        if seg_d == 0.0 and 0 <= tc <= 1:
            raise SingularPointError("path passes through the string origin")
    return sorted(breaks), crossings


def _arc_angles(path: CircularPath, phis):
    """All t in the open arc interval with t = phi (mod 2 pi), sorted along the arc."""
    t0, t1 = sorted((path.start_angle, path.start_angle + path.sweep))
    out = []
    for phi in phis:
        n = math.ceil((t0 - phi) / TWO_PI)
        t = phi + n * TWO_PI
        while t < t1:
            if t > t0:
                out.append(t)
            t += TWO_PI
    return sorted(out, reverse=path.sweep < 0)


def _arc_breaks(path: CircularPath, spec: SolenoidSpec, gauge: GaugeChoice):
    c = np.asarray(spec.center)
    D = np.asarray(path.center) - c
    rho = path.radius
    dn = float(np.hypot(*D))
    phis = []
    if dn > 0:
        cosv = (spec.radius_R**2 - dn * dn - rho * rho) / (2 * rho * dn)
        if -1 < cosv < 1:
            delta = math.atan2(D[1], D[0])
            phis += [delta + math.acos(cosv), delta - math.acos(cosv)]
    breaks = _arc_angles(path, phis)
    crossings = []
    if gauge.kind == STRING:
        u = gauge.string_direction
        beta = math.atan2(u[1], u[0])
        K = _cross(u, D)
        if abs(K) > rho:
            cand = []
        elif abs(K) == rho:
            raise SingularPointError("arc is tangent to the string")
        else:
            s = math.asin(-K / rho)
            cand = [beta + s, beta + math.pi - s]
        ends = path.point([path.start_angle, path.start_angle + path.sweep])
        if np.any(on_string(ends, c, u, spec.radius_R)):
            raise SingularPointError("arc endpoint lies on the string; rotate start_angle")
        for t in _arc_angles(path, cand):
            p = path.point(t)
            along = float(np.dot(u, p - c))
            if abs(along) <= 1e-12 * spec.radius_R:
                raise SingularPointError("arc passes through the string origin")
            if along > 0:
                # d(across)/dt for motion along the arc
                rate = rho * math.cos(t - beta) * math.copysign(1.0, path.sweep)
                crossings.append((t, 1 if rate > 0 else -1))
                breaks.append(t)
        breaks = sorted(set(breaks), reverse=path.sweep < 0)
    return breaks, crossings


def line_integral(
    spec: SolenoidSpec,
    gauge: GaugeChoice,
    path,
    rtol: float = 1e-10,
    atol: float | None = None,
) -> float:
    """Integral of A . ds (weber) along ``path``.

    In the string-offset gauge each crossing of the string contributes
    +flux (counter-clockwise) or -flux (clockwise) on top of the quadrature
    of the regular part.
    """
    if atol is None:
        atol = 1e-14 * max(abs(spec.flux_phi_b), 1e-300)
    total = []
    n_ccw = 0
    if isinstance(path, CircularPath):
        breaks, crossings = _arc_breaks(path, spec, gauge)
        knots = [path.start_angle, *breaks, path.start_angle + path.sweep]
        rho = path.radius

        def integrand(t):
            a = vector_potential(spec, gauge, path.point(t))
            return rho * (-a[..., 0] * np.sin(t) + a[..., 1] * np.cos(t))

        for lo, hi in zip(knots[:-1], knots[1:]):
            total.append(adaptive_gauss_legendre(integrand, lo, hi, rtol, atol))
        n_ccw += sum(s for _, s in crossings)
    else:
        for a, b in path.segments():
            breaks, crossings = _segment_breaks(a, b, spec, gauge)
            v = b - a

            def integrand(t, a=a, v=v):
                pts = a + np.multiply.outer(t, v)
                return vector_potential(spec, gauge, pts) @ v

            knots = [0.0, *breaks, 1.0]
            for lo, hi in zip(knots[:-1], knots[1:]):
                total.append(adaptive_gauss_legendre(integrand, lo, hi, rtol, atol))
            n_ccw += sum(s for _, s in crossings)
    return math.fsum(total) + n_ccw * spec.flux_phi_b


def winding_number(path, point) -> int:
    """Signed number of counter-clockwise turns of a closed path about ``point``."""
    if not path.closed:
        raise PreconditionError("winding number needs a closed path")
    p = np.asarray(point, dtype=float)
    if isinstance(path, CircularPath):
        d = float(np.hypot(*(p - np.asarray(path.center))))
        if math.isclose(d, path.radius, rel_tol=1e-12):
            raise SingularPointError("point lies on the path")
        return round(path.sweep / TWO_PI) if d < path.radius else 0
    wn = 0
    for a, b in path.segments():
        side = _cross(b - a, p - a)
        if a[1] <= p[1] < b[1] and side > 0:
            wn += 1
        elif b[1] <= p[1] < a[1] and side < 0:
            wn -= 1
    return wn


def ab_phase_loop(spec: SolenoidSpec, gauge: GaugeChoice, path, **quad) -> float:
    """(e / hbar) times the loop integral of A over a closed path (radians)."""
    if not path.closed:
        raise PreconditionError("ab_phase_loop needs a closed path")
    return _C.e / _C.hbar * line_integral(spec, gauge, path, **quad)


def path_phase(spec: SolenoidSpec, gauge: GaugeChoice, path, state: ElectronState | None = None, **quad) -> float:
    """A-induced phase (e / hbar) * integral of A . ds along an open path.

    ``state`` is accepted for symmetry with the other operations; the
    A-induced phase does not depend on it.
    """
    if path.closed:
        raise PreconditionError("path_phase needs an open path")
    return _C.e / _C.hbar * line_integral(spec, gauge, path, **quad)
