"""Local de Broglie wavelength near a solenoid and the resulting AB phase.

A 10 kV electron passes a solenoid of radius 5 um that carries one flux
quantum h/e.  Outside the solenoid B = 0 but A_theta = flux / (2 pi r).
"""
import math

import numpy as np

from abphase import (
    CONSTANTS,
    CircularPath,
    ElectronState,
    GaugeChoice,
    PolylinePath,
    SolenoidSpec,
    ab_phase_loop,
    de_broglie_wavelength,
    magnetic_field,
    phase_plate_delta_phi,
    phase_plate_model,
    vector_potential,
)

state = ElectronState.from_voltage(10e3)
spec = SolenoidSpec((0.0, 0.0), 5e-6, CONSTANTS.flux_quantum)

print(f"p_o      = {state.momentum_p_o:.4e} kg m/s")
print(f"lambda_o = {state.wavelength_lambda_o:.4e} m")
print(f"A(R)     = {spec.A_theta:.4e} Wb/m")
print(f"eA(R)    = {CONSTANTS.e * spec.A_theta:.4e} kg m/s")

# Above the solenoid A points -x, against a beam moving +x; below it points +x.
beam = (1.0, 0.0)
a_up = vector_potential(spec, GaugeChoice.symmetric(), (0.0, spec.radius_R))
a_dn = vector_potential(spec, GaugeChoice.symmetric(), (0.0, -spec.radius_R))
for name, a in (("upper", a_up), ("lower", a_dn)):
    lam = de_broglie_wavelength(state, a, beam)
    print(f"{name}: A = {a}, lambda / lambda_o - 1 = {lam / state.wavelength_lambda_o - 1:+.4e}")

# Treat each side as a plate of index n_q and thickness pi R
model = phase_plate_model(state, spec)
print(f"delta n_q = {model.delta_n_q:.4e}")
print(f"plate phase   = {model.delta_phi(state.wavelength_lambda_o):.12f} rad")
print(f"(e/hbar) L A  = {phase_plate_delta_phi(state, spec):.12f} rad")

# The same number from the loop integral, in two gauges and on several loops
R = spec.radius_R
loops = {
    "circle 2R": CircularPath((0.0, 0.0), 2 * R, 0.5),
    "circle 20R": CircularPath((0.0, 0.0), 20 * R, 0.5),
    "square 3R": PolylinePath([(3 * R, -3 * R), (3 * R, 3 * R), (-3 * R, 3 * R), (-3 * R, -3 * R)], True),
    "outside": CircularPath((6 * R, 0.0), 2 * R, 0.5),
}
for gauge in (GaugeChoice.symmetric(), GaugeChoice.string(math.radians(30))):
    for name, path in loops.items():
        print(f"{gauge.kind:20s} {name:10s} {ab_phase_loop(spec, gauge, path):.12f}")

# B vanishes outside and is uniform inside, whatever the gauge
for r in (0.5 * R, 3 * R):
    b = magnetic_field(spec, GaugeChoice.string(1.0), (r * np.cos(2.0), r * np.sin(2.0)))
    print(f"B at r = {r / R:.1f} R: {b.value:.4e} T (interior value {spec.interior_field:.4e} T)")

# The phase is the same at every energy
for kv in (1, 10, 100):
    s = ElectronState.from_voltage(kv * 1e3)
    print(f"{kv:4d} kV: lambda_o = {s.wavelength_lambda_o:.3e} m, "
          f"plate phase = {phase_plate_model(s, spec).delta_phi(s.wavelength_lambda_o):.12f}")
