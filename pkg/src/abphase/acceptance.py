"""The nine acceptance criteria as plain functions.

Each ``criterion_N()`` returns a :class:`CriterionResult`; ``run_all`` runs a
selection of them.  Split-step runs are memoized per process, so criteria
that share a run (the desk-scale alpha sweep feeds three of them) pay for it
once.
"""
from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .constants import CONSTANTS
from .fields import GaugeChoice, SolenoidSpec
from .fringes import SlitGeometry, extract_fringe_shift, fringe_shift_prediction, two_slit_pattern, wrap_fringes
from .phase import (
    CircularPath,
    ElectronState,
    PolylinePath,
    ab_phase_loop,
    phase_plate_delta_phi,
    phase_plate_model,
)
from .presets import pde_shift
from .schrodinger import (
    ApparatusMask,
    GridSpec,
    SplitStepPropagator,
    arrival_time_delay,
    desk_experiment,
    free_gaussian_exact,
    initialize_packet,
)

__all__ = ["CriterionResult", "CRITERIA", "run_all", "pde_run"]

_C = CONSTANTS
R = 5e-6
# the coarser tier used for the string-relocation and periodicity sweeps
CHECK_FACTOR = 0.5


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title} | {self.detail}"


@functools.lru_cache(maxsize=None)
def pde_run(alpha: float, angle_deg: float = 0.0, factor: float = 1.0):
    """Memoized split-step run; ``factor = 1`` is the 1024^2 desk grid."""
    exp = desk_experiment(alpha, math.radians(angle_deg), momentum_factor=factor)
    return exp.run()


def _shift(alpha, angle_deg=0.0, factor=1.0):
    pattern = pde_run(alpha, angle_deg, factor)[0]
    reference = pde_run(0.0, 0.0, factor)[0]
    return pde_shift(pattern, reference, alpha)


def _rel(a, b):
    return abs(a - b) / abs(b)


def criterion_1():
    """Worked numbers at 10 kV, R = 5 um, one flux quantum."""
    state = ElectronState.from_voltage(10e3)
    spec = SolenoidSpec((0.0, 0.0), R, _C.flux_quantum)
    eA = _C.e * spec.A_theta
    dphi = phase_plate_delta_phi(state, spec)
    errs = {
        "p_o": _rel(state.momentum_p_o, 5.40e-23),
        "A_theta": _rel(spec.A_theta, 1.32e-10),
        "eA": _rel(eA, 2.11e-29),
        "delta_phi": _rel(dphi, 2 * math.pi),
    }
    ok = max(errs["p_o"], errs["A_theta"], errs["eA"]) <= 5e-3 and errs["delta_phi"] <= 1e-9
    detail = (f"p_o={state.momentum_p_o:.4e} A={spec.A_theta:.4e} eA={eA:.4e} "
              f"dphi-2pi={dphi - 2 * math.pi:.2e}")
    return ok, detail, errs


def _loops():
    paths = {f"circle {m}R": CircularPath((0.0, 0.0), m * R, 0.5) for m in (2, 5, 20)}
    paths["square 3R"] = PolylinePath(
        [(3 * R, -3 * R), (3 * R, 3 * R), (-3 * R, 3 * R), (-3 * R, -3 * R)], closed=True
    )
    outside = {
        "circle off-axis": CircularPath((6 * R, 0.5 * R), 2 * R, 0.3),
        "square off-axis": PolylinePath(
            [(4 * R, -2 * R), (8 * R, -2 * R), (8 * R, 2 * R), (4 * R, 2 * R)], closed=True
        ),
    }
    return paths, outside


def criterion_2():
    """Loop quadrature equals (e / hbar) flux; non-enclosing loops vanish."""
    spec = SolenoidSpec((0.0, 0.0), R, _C.flux_quantum)
    target = _C.e / _C.hbar * spec.flux_phi_b
    paths, outside = _loops()
    worst_rel, worst_abs = 0.0, 0.0
    for gauge in (GaugeChoice.symmetric(), GaugeChoice.string(0.0), GaugeChoice.string(2.0)):
        for path in paths.values():
            worst_rel = max(worst_rel, _rel(ab_phase_loop(spec, gauge, path), target))
        for path in outside.values():
            worst_abs = max(worst_abs, abs(ab_phase_loop(spec, gauge, path)))
    ok = worst_rel <= 1e-9 and worst_abs <= 1e-9
    return ok, f"max rel err {worst_rel:.1e}, max |non-enclosing| {worst_abs:.1e} rad", {
        "max_rel": worst_rel, "max_abs_outside": worst_abs}


def criterion_3():
    """Phase-plate phase equals the loop phase for 20 fluxes."""
    state = ElectronState.from_voltage(10e3)
    worst = 0.0
    for frac in np.linspace(-2.0, 2.0, 20):
        spec = SolenoidSpec((0.0, 0.0), R, frac * _C.flux_quantum)
        plate = phase_plate_delta_phi(state, spec)
        loop = ab_phase_loop(spec, GaugeChoice.symmetric(), CircularPath((0.0, 0.0), R, 0.5))
        worst = max(worst, _rel(plate, loop))
    return worst <= 1e-12, f"max rel diff {worst:.1e}", {"max_rel": worst}


def criterion_4():
    """Synthesized pattern shifts follow the prediction; h/2e interchanges fringes."""
    state = ElectronState.from_voltage(10e3)
    geom = SlitGeometry(1e-6, 2e-7, 1.0, 2.5e-4, 8192)
    period = geom.fringe_spacing(state)
    reference = two_slit_pattern(geom, state, 0.0)
    worst = 0.0
    for frac in np.linspace(-1.0, 1.0, 20):
        flux = frac * _C.flux_quantum
        pattern = two_slit_pattern(geom, state, _C.e * flux / _C.hbar)
        predicted = fringe_shift_prediction(geom, state, flux) / period
        got = extract_fringe_shift(pattern, reference, branch_center=predicted) / period
        worst = max(worst, abs(got - predicted))
    half = two_slit_pattern(geom, state, math.pi)
    # central fringes, where the slit envelope barely moves the maxima
    central = np.abs(half.screen_positions) < 1.5 * period
    bright_ref = find_peaks(np.where(central, reference.intensity, 0.0))[0]
    bright_half = find_peaks(np.where(central, half.intensity, 0.0))[0]
    # each pattern is dark where the other is bright
    interchanged = bool(
        np.all(half.intensity[bright_ref] < 0.01 * reference.intensity[bright_ref])
        and np.all(reference.intensity[bright_half] < 0.01 * half.intensity[bright_half])
    )
    half_shift = abs(extract_fringe_shift(half, reference, branch_center=0.5) / period)
    ok = worst <= 0.01 and interchanged and abs(half_shift - 0.5) <= 0.01
    return ok, f"max error {worst:.1e} fringe, h/2e shift {half_shift:.4f}, interchanged={interchanged}", {
        "max_error_fringes": worst, "half_flux_shift": half_shift}


ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def criterion_5():
    """Desk-scale split-step shifts at the alpha sweep."""
    got = {a: _shift(a) for a in ALPHAS}
    errs = {a: abs(float(wrap_fringes(got[a] - a))) for a in ALPHAS}
    worst = max(errs.values())
    detail = ", ".join(f"{a}:{got[a]:+.4f}" for a in ALPHAS)
    return worst <= 0.02, f"shifts {{{detail}}}, worst {worst:.1e}", {"shifts": got, "worst": worst}


ANGLES_DEG = (-90.0, -45.0, 0.0, 45.0, 90.0)


def criterion_6():
    """String relocation over five ray angles leaves the shift unchanged."""
    got = [_shift(0.5, a, CHECK_FACTOR) for a in ANGLES_DEG]
    spread = float(np.max(np.abs(wrap_fringes(np.subtract.outer(got, got)))))
    return spread < 0.005, f"shifts {np.round(got, 6).tolist()}, spread {spread:.1e} fringe", {
        "shifts": dict(zip(ANGLES_DEG, got)), "spread": spread}


FACTORS = (0.25, 0.5, 1.0)


def criterion_7():
    """Analytic and dynamical non-dispersion, and no arrival-time delay."""
    spec = SolenoidSpec((0.0, 0.0), R, _C.flux_quantum)
    phases = []
    for volts in np.geomspace(1e3, 1e5, 11):
        state = ElectronState.from_voltage(volts)
        model = phase_plate_model(state, spec)
        phases.append(model.delta_phi(state.wavelength_lambda_o))
        phases.append(phase_plate_delta_phi(state, spec))
    analytic = (max(phases) - min(phases)) / abs(np.mean(phases))
    shifts = [_shift(0.5, 0.0, f) for f in FACTORS]
    spread = float(np.max(np.abs(wrap_fringes(np.subtract.outer(shifts, shifts)))))
    rec0, rec5 = pde_run(0.0)[1], pde_run(0.5)[1]
    delay = abs(arrival_time_delay(rec0, rec5)) / rec0.transit_time
    ok = analytic <= 1e-12 and spread <= 0.02 and delay < 1e-3
    detail = (f"(a) rel spread {analytic:.1e}; (b) shifts {np.round(shifts, 5).tolist()} "
              f"spread {spread:.1e}; (c) delay/transit {delay:.1e}")
    return ok, detail, {"analytic_spread": analytic, "shifts": shifts, "delay_fraction": delay}


def criterion_8():
    """Shift at flux and flux + h/e agree, analytically and in the PDE."""
    state = ElectronState.from_voltage(10e3)
    geom = SlitGeometry(1e-6, 2e-7, 1.0, 2.5e-4, 8192)
    period = geom.fringe_spacing(state)
    reference = two_slit_pattern(geom, state, 0.0)
    worst = 0.0
    for frac in (-0.8, -0.3, 0.1, 0.25, 0.6):
        s = [extract_fringe_shift(two_slit_pattern(geom, state, 2 * math.pi * f), reference) / period
             for f in (frac, frac + 1.0)]
        worst = max(worst, abs(float(wrap_fringes(s[1] - s[0]))))
    pde = abs(float(wrap_fringes(_shift(1.25, 0.0, CHECK_FACTOR) - _shift(0.25, 0.0, CHECK_FACTOR))))
    ok = worst <= 0.01 and pde <= 0.01
    return ok, f"analytic diff {worst:.1e}, PDE diff {pde:.1e} fringe", {"analytic": worst, "pde": pde}


def criterion_9():
    """Free Gaussian against the closed form; norm with absorbers off."""
    grid = GridSpec.stable(256, 256, (256.0, 256.0), 100, precision="double")
    free = ApparatusMask(barrier=False, solenoid_disk=False, absorbing_boundary=False)
    center, sigma, k = (-20.0, 5.0), 6.0, 0.5
    packet = initialize_packet(grid, center, sigma, k)
    psi = SplitStepPropagator(grid, free).evolve(packet.amplitude, 100)
    exact = free_gaussian_exact(grid, center, sigma, k, 100 * grid.time_step)
    err = float(np.max(np.abs(psi - exact)))
    # a string with flux is a pure gauge away from its origin: still unitary
    stringy = ApparatusMask(barrier=False, solenoid_disk=False, absorbing_boundary=False,
                            solenoid_center=(30.0, 0.0), flux_fraction_alpha=0.37)
    psi = SplitStepPropagator(grid, stringy).evolve(packet.amplitude, 100)
    drift = abs(float(np.sum(np.abs(psi) ** 2) * grid.cell_area) - packet.norm(grid))
    ok = err <= 1e-8 and drift <= 1e-10
    return ok, f"max pointwise error {err:.1e}, norm drift {drift:.1e}", {"max_error": err, "norm_drift": drift}


CRITERIA = {
    1: ("worked example numbers", criterion_1),
    2: ("loop phase equals flux phase", criterion_2),
    3: ("phase plate equals loop integral", criterion_3),
    4: ("fringe shift closed loop", criterion_4),
    5: ("split-step shifts at desk scale", criterion_5),
    6: ("gauge invariance under string relocation", criterion_6),
    7: ("non-dispersion and no time delay", criterion_7),
    8: ("flux-quantum periodicity", criterion_8),
    9: ("free propagation and norm", criterion_9),
}


def evaluate(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    ok, detail, values = fn()
    return CriterionResult(number, title, bool(ok), detail, values, time.perf_counter() - t0)


def run_all(numbers=None, report=None):
    """Evaluate the selected criteria (all by default) in order.

    ``report`` is called with each result as it completes.
    """
    results = []
    for n in sorted(numbers or CRITERIA):
        res = evaluate(n)
        if report is not None:
            report(res)
        results.append(res)
    return results
