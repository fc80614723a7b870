"""Experiment presets behind the command-line subcommands.

Each preset takes an :class:`~abphase.config.ExperimentConfig` and returns a
``(results, patterns)`` pair: a flat dict of scalar results with a fixed key
set per kind, and a dict of named :class:`FringePattern` objects to be written
as CSV.  Screen positions in returned patterns are in meters.
"""
from __future__ import annotations

import math

import numpy as np

from .config import ExperimentConfig
from .constants import CONSTANTS, UnitScale, from_internal
from .fields import GaugeChoice, SolenoidSpec
from .fringes import (
    FringePattern,
    SlitGeometry,
    extract_fringe_shift,
    fringe_shift_prediction,
    two_slit_pattern,
    wrap_fringes,
)
from .phase import (
    CircularPath,
    ElectronState,
    PolylinePath,
    ab_phase_loop,
    phase_plate_delta_phi,
    phase_plate_model,
    winding_number,
)
from .schrodinger import DESK_WAVELENGTH, arrival_time_delay, desk_experiment

__all__ = [
    "RESULT_KEYS",
    "phase_preset",
    "loop_preset",
    "fringes_preset",
    "simulate_preset",
    "gauge_check_preset",
    "dispersion_check_preset",
    "pde_shift",
]

RESULT_KEYS = {
    "phase": (
        "p_o", "E_o_J", "lambda_o_m", "A_theta_Wb_per_m", "eA", "qri_upper", "qri_lower",
        "delta_n_q", "L_i_m", "t_i_m", "delta_phi_rad", "delta_phi_loop_rad", "flux_Wb",
    ),
    "loop": ("winding_number", "phase_rad", "flux_Wb", "gauge"),
    "fringes": (
        "delta_phi_rad", "flux_Wb", "fringe_spacing_m", "shift_m", "shift_fringes",
        "predicted_shift_m", "predicted_fringes", "small_angle_violated",
    ),
    "simulate": (
        "alpha", "string_angle_rad", "momentum_factor", "grid_n", "shift_fringes",
        "predicted_fringes", "shift_m", "fringe_spacing_m", "arrival_delay_fraction",
        "steps_taken", "length_scale_m",
    ),
    "gauge-check": ("alpha", "momentum_factor", "grid_n", "table", "max_deviation_fringes"),
    "dispersion-check": ("alpha", "table", "max_pairwise_deviation_fringes"),
    "accept": ("criteria", "all_passed"),
}


def _solenoid(cfg: ExperimentConfig) -> SolenoidSpec:
    return SolenoidSpec((0.0, 0.0), cfg.radius, cfg.flux)


def _gauge(cfg: ExperimentConfig) -> GaugeChoice:
    return GaugeChoice.symmetric() if cfg.gauge == "symmetric" else GaugeChoice.string(cfg.string_angle)


def phase_preset(cfg: ExperimentConfig):
    """Local-wavelength quantities and the phase-plate phase difference."""
    state = ElectronState.from_voltage(cfg.voltage)
    spec = _solenoid(cfg)
    model = phase_plate_model(state, spec)
    loop = CircularPath(spec.center, 2.0 * spec.radius_R, cfg.string_angle + 0.5)
    results = {
        "p_o": state.momentum_p_o,
        "E_o_J": state.energy_E_o,
        "lambda_o_m": state.wavelength_lambda_o,
        "A_theta_Wb_per_m": spec.A_theta,
        "eA": CONSTANTS.e * spec.A_theta,
        "qri_upper": model.qri_upper,
        "qri_lower": model.qri_lower,
        "delta_n_q": model.delta_n_q,
        "L_i_m": model.interaction_length_L_i,
        "t_i_m": model.plate_thickness_t_i,
        "delta_phi_rad": phase_plate_delta_phi(state, spec),
        "delta_phi_loop_rad": ab_phase_loop(spec, _gauge(cfg), loop, rtol=cfg.quad_rtol),
        "flux_Wb": spec.flux_phi_b,
    }
    return results, {}


def _loop_path(cfg: ExperimentConfig):
    c = (cfg.loop_center_x, cfg.loop_center_y)
    r = cfg.loop_radius
    if cfg.loop_shape == "circle":
        # start off the string so no endpoint sits on it
        return CircularPath(c, r, cfg.string_angle + 0.5)
    # square with half side r, vertices off the axes
    pts = [(c[0] + r, c[1] - r), (c[0] + r, c[1] + r), (c[0] - r, c[1] + r), (c[0] - r, c[1] - r)]
    return PolylinePath(pts, closed=True)


def loop_preset(cfg: ExperimentConfig):
    spec = _solenoid(cfg)
    path = _loop_path(cfg)
    results = {
        "winding_number": winding_number(path, spec.center),
        "phase_rad": ab_phase_loop(spec, _gauge(cfg), path, rtol=cfg.quad_rtol),
        "flux_Wb": spec.flux_phi_b,
        "gauge": _gauge(cfg).kind,
    }
    return results, {}


def fringes_preset(cfg: ExperimentConfig):
    """Analytic two-slit pattern at the AB phase e flux / hbar."""
    state = ElectronState.from_voltage(cfg.voltage)
    geom = SlitGeometry(
        cfg.slit_spacing, cfg.slit_width, cfg.screen_distance, cfg.screen_half_extent, cfg.samples
    )
    dphi = CONSTANTS.e * cfg.flux / CONSTANTS.hbar
    reference = two_slit_pattern(geom, state, 0.0)
    pattern = two_slit_pattern(geom, state, dphi)
    period = geom.fringe_spacing(state)
    predicted = fringe_shift_prediction(geom, state, cfg.flux)
    shift = extract_fringe_shift(pattern, reference, branch_center=predicted / period)
    results = {
        "delta_phi_rad": dphi,
        "flux_Wb": cfg.flux,
        "fringe_spacing_m": period,
        "shift_m": shift,
        "shift_fringes": shift / period,
        "predicted_shift_m": predicted,
        "predicted_fringes": predicted / period,
        "small_angle_violated": geom.small_angle_violated,
    }
    return results, {"pattern": pattern, "reference": reference}


def pde_shift(pattern: FringePattern, reference: FringePattern, alpha: float) -> float:
    """Extracted PDE shift in fringes on the branch centered at alpha mod 1."""
    center = float(np.mod(alpha, 1.0))
    return extract_fringe_shift(pattern, reference, branch_center=center) / pattern.fringe_spacing_hint


def _desk(cfg: ExperimentConfig, alpha, angle=0.0, factor=None):
    factor = cfg.momentum_factor if factor is None else factor
    n = int(round(cfg.grid * factor))
    return desk_experiment(alpha, angle, momentum_factor=factor, n=n, precision=cfg.precision)


def _to_meters(pattern: FringePattern, scale: UnitScale) -> FringePattern:
    meta = dict(pattern.metadata, length_scale_m=scale.length_scale)
    return FringePattern(
        from_internal(pattern.screen_positions, "length", scale),
        pattern.intensity,
        float(from_internal(pattern.fringe_spacing_hint, "length", scale)),
        meta,
    )


def simulate_preset(cfg: ExperimentConfig):
    """Split-step runs at alpha = flux / (h/e) and at zero flux.

    The electron wavelength at ``voltage`` is mapped onto the desk-scale
    wavelength at ``momentum_factor = 1``; that fixes the meter scale.
    """
    alpha = cfg.flux_fraction
    exp_a = _desk(cfg, alpha, cfg.string_angle)
    exp_0 = _desk(cfg, 0.0)
    pattern, record = exp_a.run()
    reference, record_0 = exp_0.run()
    shift = pde_shift(pattern, reference, alpha)
    lam = ElectronState.from_voltage(cfg.voltage).wavelength_lambda_o
    scale = UnitScale.from_length(lam / DESK_WAVELENGTH)
    results = {
        "alpha": alpha,
        "string_angle_rad": cfg.string_angle,
        "momentum_factor": cfg.momentum_factor,
        "grid_n": exp_a.grid.nx,
        "shift_fringes": shift,
        "predicted_fringes": float(np.mod(alpha, 1.0)),
        "shift_m": shift * float(from_internal(pattern.fringe_spacing_hint, "length", scale)),
        "fringe_spacing_m": float(from_internal(pattern.fringe_spacing_hint, "length", scale)),
        "arrival_delay_fraction": arrival_time_delay(record_0, record) / record_0.transit_time,
        "steps_taken": record.steps_taken,
        "length_scale_m": scale.length_scale,
    }
    return results, {"pattern": _to_meters(pattern, scale), "reference": _to_meters(reference, scale)}


def _max_pairwise(shifts) -> float:
    s = np.asarray(shifts, dtype=float)
    return float(np.max(np.abs(wrap_fringes(s[:, None] - s[None, :])))) if len(s) > 1 else 0.0


def gauge_check_preset(cfg: ExperimentConfig):
    """Extracted shift for each string direction in ``string_angles``."""
    alpha = cfg.flux_fraction
    reference = _desk(cfg, 0.0).run()[0]
    table = []
    for angle in cfg.string_angles:
        pattern = _desk(cfg, alpha, angle).run()[0]
        table.append({
            "string_angle_rad": angle,
            "string_angle_deg": math.degrees(angle),
            "shift_fringes": pde_shift(pattern, reference, alpha),
        })
    results = {
        "alpha": alpha,
        "momentum_factor": cfg.momentum_factor,
        "grid_n": int(round(cfg.grid * cfg.momentum_factor)),
        "table": table,
        "max_deviation_fringes": _max_pairwise([row["shift_fringes"] for row in table]),
    }
    return results, {}


def dispersion_check_preset(cfg: ExperimentConfig):
    """Extracted shift for each packet momentum in ``momentum_factors``."""
    alpha = cfg.flux_fraction
    table = []
    for factor in cfg.momentum_factors:
        reference = _desk(cfg, 0.0, factor=factor).run()[0]
        exp = _desk(cfg, alpha, cfg.string_angle, factor=factor)
        pattern = exp.run()[0]
        table.append({
            "momentum_factor": factor,
            "grid_n": exp.grid.nx,
            "shift_fringes": pde_shift(pattern, reference, alpha),
        })
    results = {
        "alpha": alpha,
        "table": table,
        "max_pairwise_deviation_fringes": _max_pairwise([row["shift_fringes"] for row in table]),
    }
    return results, {}
