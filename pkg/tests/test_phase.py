import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.integrate import quad

from abphase.constants import CONSTANTS
from abphase.errors import DegenerateStateError, PreconditionError, SingularPointError
from abphase.fields import GaugeChoice, SolenoidSpec, vector_potential
from abphase.phase import (
    CircularPath,
    ElectronState,
    PolylinePath,
    ab_phase_loop,
    circle_polyline,
    de_broglie_wavelength,
    delta_n_q,
    line_integral,
    mechanical_momentum,
    path_phase,
    phase_plate_delta_phi,
    phase_plate_model,
    quantum_refractive_index,
    winding_number,
)

C = CONSTANTS
R = 5e-6
SPEC = SolenoidSpec((0.0, 0.0), R, C.flux_quantum)
SYM = GaugeChoice.symmetric()
GAUGES = [SYM, GaugeChoice.string(0.0), GaugeChoice.string(2.3), GaugeChoice.string(-1.2)]
TWO_PI = 2 * math.pi

# rounded worked-example inputs
P_O = 5.40e-23
EA = 2.11e-29


def test_ten_kilovolt_state():
    s = ElectronState.from_voltage(10e3)
    assert s.momentum_p_o == pytest.approx(5.40e-23, rel=5e-3)
    assert s.energy_E_o == pytest.approx(C.e * 1e4, rel=1e-15)
    assert s.wavelength_lambda_o == pytest.approx(1.2264e-11, rel=1e-4)


@given(volts=st.floats(min_value=1.0, max_value=1e6))
def test_state_fields_are_consistent(volts):
    s = ElectronState.from_voltage(volts)
    assert s.momentum_p_o**2 / (2 * C.m) == pytest.approx(s.energy_E_o, rel=1e-14)
    assert s.wavelength_lambda_o * s.momentum_p_o == pytest.approx(C.h, rel=1e-14)
    assert s.wavenumber_k_o * s.wavelength_lambda_o == pytest.approx(TWO_PI, rel=1e-14)
    again = ElectronState.from_wavelength(s.wavelength_lambda_o)
    assert again.momentum_p_o == pytest.approx(s.momentum_p_o, rel=1e-14)


def test_degenerate_states_rejected():
    with pytest.raises(DegenerateStateError):
        ElectronState.from_momentum(0.0)
    with pytest.raises(DegenerateStateError):
        ElectronState.from_energy(-1.0)


def test_mechanical_momentum_examples():
    s = ElectronState.from_momentum(P_O)
    a = EA / C.e
    assert mechanical_momentum(s, (0.0, 0.0)) == P_O
    assert mechanical_momentum(s, (-a, 0.0)) == pytest.approx(P_O + EA, rel=1e-15)
    assert mechanical_momentum(s, (a, 0.0)) == pytest.approx(P_O - EA, rel=1e-15)
    # the perpendicular component does not enter
    assert mechanical_momentum(s, (0.0, 1e3)) == P_O


def test_wavelength_and_index_first_order_values():
    s = ElectronState.from_momentum(P_O)
    a = EA / C.e
    # e|A| / p_o = 2.11e-29 / 5.40e-23 = 3.907e-7
    assert EA / P_O == pytest.approx(3.907e-7, rel=1e-3)
    assert quantum_refractive_index(s, (0.0, 0.0)) == 1.0
    assert quantum_refractive_index(s, (-a, 0.0)) - 1 == pytest.approx(3.907e-7, rel=1e-3)
    assert 1 - quantum_refractive_index(s, (a, 0.0)) == pytest.approx(3.907e-7, rel=1e-3)
    lam = s.wavelength_lambda_o
    assert de_broglie_wavelength(s, (0.0, 0.0)) == lam
    assert de_broglie_wavelength(s, (-a, 0.0)) == pytest.approx(lam * (1 - 3.907e-7), rel=1e-9)
    assert de_broglie_wavelength(s, (a, 0.0)) == pytest.approx(lam * (1 + 3.907e-7), rel=1e-9)


@given(
    a_par=st.floats(min_value=-1e-9, max_value=1e-9),
    angle=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_index_is_exactly_linear_and_matches_wavelength(a_par, angle):
    s = ElectronState.from_voltage(10e3)
    u = (math.cos(angle), math.sin(angle))
    a_vec = (a_par * u[0], a_par * u[1])
    n = quantum_refractive_index(s, a_vec, u)
    assert n - 1 == pytest.approx(-C.e * a_par / s.momentum_p_o, rel=1e-7, abs=4e-16)
    assert de_broglie_wavelength(s, a_vec, u) == pytest.approx(s.wavelength_lambda_o / n, rel=1e-12)


def test_zero_mechanical_momentum_rejected():
    s = ElectronState.from_momentum(P_O)
    with pytest.raises(DegenerateStateError):
        de_broglie_wavelength(s, (P_O / C.e, 0.0))
    with pytest.raises(DegenerateStateError):
        quantum_refractive_index(s, (P_O / C.e, 0.0))


def test_non_unit_direction_rejected():
    with pytest.raises(PreconditionError):
        mechanical_momentum(ElectronState.from_voltage(1e3), (0.0, 0.0), (2.0, 0.0))


def test_delta_n_q_examples():
    s = ElectronState.from_momentum(P_O)
    a = EA / C.e
    assert delta_n_q(s, 1e-10, 1e-10) == 0.0
    assert delta_n_q(s, -a, a) == pytest.approx(2 * 3.907e-7, rel=1e-3)
    assert delta_n_q(s, -a + 3e-11, a + 3e-11) == pytest.approx(delta_n_q(s, -a, a), rel=1e-12)


def test_phase_plate_model_reproduces_loop_phase():
    s = ElectronState.from_voltage(10e3)
    model = phase_plate_model(s, SPEC)
    assert model.interaction_length_L_i == pytest.approx(TWO_PI * R)
    assert model.qri_upper > 1 > model.qri_lower
    assert model.delta_n_q == pytest.approx(model.qri_upper - model.qri_lower, rel=1e-9)
    assert model.delta_phi(s.wavelength_lambda_o) == pytest.approx(TWO_PI, rel=1e-12)


def test_phase_plate_delta_phi_examples():
    assert phase_plate_delta_phi(ElectronState.from_voltage(1e4), SPEC) == pytest.approx(TWO_PI, rel=1e-15)
    assert phase_plate_delta_phi(None, SolenoidSpec((0, 0), R, 0.0)) == 0.0
    half = SolenoidSpec((0, 0), R, C.flux_quantum / 2)
    lo = phase_plate_delta_phi(ElectronState.from_voltage(1e3), half)
    hi = phase_plate_delta_phi(ElectronState.from_voltage(1e5), half)
    assert lo == hi == pytest.approx(math.pi, rel=1e-15)


# --- loop integrals -----------------------------------------------------------------

def _quad_loop(spec, center, radius):
    """scipy.integrate.quad oracle for a circle in the symmetric gauge."""

    def integrand(t):
        p = np.array(center) + radius * np.array([math.cos(t), math.sin(t)])
        a = vector_potential(spec, SYM, p)
        return radius * (-a[0] * math.sin(t) + a[1] * math.cos(t))

    # split at the angles where the circle meets r = R
    d = math.hypot(*center)
    pts = []
    if d > 0:
        cosv = (spec.radius_R**2 - d * d - radius * radius) / (2 * radius * d)
        if -1 < cosv < 1:
            base = math.atan2(center[1], center[0])
            pts = sorted(np.mod([base + math.acos(cosv), base - math.acos(cosv)], TWO_PI))
    val, _ = quad(integrand, 0.0, TWO_PI, points=pts or None, epsabs=1e-25, epsrel=1e-12, limit=400)
    return C.e / C.hbar * val


@pytest.mark.parametrize("gauge", GAUGES, ids=lambda g: f"{g.kind}-{g.string_angle:.1f}")
@pytest.mark.parametrize("multiple", [2, 5, 20])
def test_enclosing_circles_give_flux_phase(gauge, multiple):
    path = CircularPath((0.0, 0.0), multiple * R, 0.5)
    assert ab_phase_loop(SPEC, gauge, path) == pytest.approx(TWO_PI, rel=1e-12)
    poly = circle_polyline((0.1 * R, -0.2 * R), multiple * R, 256)
    assert ab_phase_loop(SPEC, gauge, poly) == pytest.approx(TWO_PI, rel=1e-12)


@pytest.mark.parametrize("center,radius", [((0.0, 0.0), 2 * R), ((0.3 * R, 0.1 * R), 0.6 * R),
                                          ((1.2 * R, 0.0), 0.7 * R), ((4 * R, 1 * R), 2 * R)])
def test_loop_matches_scipy_quad_oracle(center, radius):
    path = CircularPath(center, radius, 0.1)
    assert ab_phase_loop(SPEC, SYM, path) == pytest.approx(_quad_loop(SPEC, center, radius), rel=1e-10, abs=1e-12)


def test_interior_loop_encloses_fraction():
    for frac in (0.2, 0.5, 0.9):
        path = CircularPath((0.0, 0.0), frac * R, 0.5)
        for gauge in GAUGES:
            assert ab_phase_loop(SPEC, gauge, path) == pytest.approx(TWO_PI * frac**2, rel=1e-11)


@pytest.mark.parametrize("gauge", GAUGES, ids=lambda g: f"{g.kind}-{g.string_angle:.1f}")
def test_non_enclosing_loops_vanish(gauge):
    for center in [(4 * R, 0.0), (0.0, -5 * R), (-6 * R, 3 * R)]:
        path = CircularPath(center, 2 * R, 0.3)
        assert abs(ab_phase_loop(SPEC, gauge, path)) < 1e-12
        square = PolylinePath([(center[0] + s * R, center[1] + t * R)
                               for s, t in ((-1.5, -1.3), (1.3, -1.5), (1.5, 1.3), (-1.3, 1.5))], True)
        assert abs(ab_phase_loop(SPEC, gauge, square)) < 1e-12


@given(
    flux_exp=st.floats(min_value=-18, max_value=-12),
    sign=st.sampled_from([-1.0, 1.0]),
    radius=st.floats(min_value=1.05, max_value=50.0),
    angle=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_consistency_chain(flux_exp, sign, radius, angle):
    spec = SolenoidSpec((0.0, 0.0), R, sign * 10.0**flux_exp)
    target = C.e / C.hbar * spec.flux_phi_b
    plate = phase_plate_delta_phi(ElectronState.from_voltage(1e4), spec)
    assert plate == pytest.approx(target, rel=1e-12)
    path = CircularPath((0.0, 0.0), radius * R, angle + 0.25)
    for gauge in (SYM, GaugeChoice.string(angle)):
        assert ab_phase_loop(spec, gauge, path) == pytest.approx(target, rel=1e-9)


def test_multi_turn_and_clockwise_loops():
    twice = CircularPath((0.0, 0.0), 3 * R, 0.5, 2 * TWO_PI)
    assert winding_number(twice, (0.0, 0.0)) == 2
    assert ab_phase_loop(SPEC, GaugeChoice.string(1.0), twice) == pytest.approx(2 * TWO_PI, rel=1e-12)
    cw = circle_polyline((0.0, 0.0), 3 * R, 64, clockwise=True)
    assert winding_number(cw, (0.0, 0.0)) == -1
    assert ab_phase_loop(SPEC, GaugeChoice.string(0.4), cw) == pytest.approx(-TWO_PI, rel=1e-12)


@given(x=st.floats(min_value=-3.0, max_value=3.0), y=st.floats(min_value=-3.0, max_value=3.0))
def test_polygon_winding_number(x, y):
    square = PolylinePath([(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)], closed=True)
    assume(min(abs(abs(x) - 1), abs(abs(y) - 1)) > 1e-9)
    inside = abs(x) < 1 and abs(y) < 1
    assert winding_number(square, (x, y)) == int(inside)
    assert winding_number(square.reversed(), (x, y)) == -int(inside)


def test_square_contour_in_both_gauges():
    sq = PolylinePath([(3 * R, -3 * R), (3 * R, 3 * R), (-3 * R, 3 * R), (-3 * R, -3 * R)], closed=True)
    for gauge in GAUGES:
        assert ab_phase_loop(SPEC, gauge, sq) == pytest.approx(TWO_PI, rel=1e-12)


# --- open paths ----------------------------------------------------------------------

def test_radial_segment_has_no_phase():
    seg = PolylinePath([(2 * R, 0.0), (9 * R, 0.0)])
    assert path_phase(SPEC, SYM, seg) == 0.0


def test_semicircle_difference_is_loop_phase():
    upper = CircularPath((0.0, 0.0), 2 * R, math.pi, -math.pi)  # left to right over the top
    lower = CircularPath((0.0, 0.0), 2 * R, math.pi, math.pi)  # left to right underneath
    for gauge in (SYM, GaugeChoice.string(0.5 * math.pi), GaugeChoice.string(-2.0)):
        diff = path_phase(SPEC, gauge, lower) - path_phase(SPEC, gauge, upper)
        assert diff == pytest.approx(TWO_PI, rel=1e-12)


def test_open_path_phase_is_gauge_dependent_but_differences_are_not():
    a = PolylinePath([(-3 * R, -0.5 * R), (0.0, 2 * R), (3 * R, 0.4 * R)])
    b = PolylinePath([(-3 * R, -0.5 * R), (0.0, -2 * R), (3 * R, 0.4 * R)])
    sym = path_phase(SPEC, SYM, a)
    strg = path_phase(SPEC, GaugeChoice.string(math.pi / 3), a)
    assert abs(sym - strg) > 0.1
    d_sym = path_phase(SPEC, SYM, b) - path_phase(SPEC, SYM, a)
    d_str = path_phase(SPEC, GaugeChoice.string(math.pi / 3), b) - strg
    assert d_sym == pytest.approx(d_str, rel=1e-12)


def test_reversal_negates():
    p = PolylinePath([(-3 * R, 1.0 * R), (0.5 * R, 2 * R), (4 * R, -1.0 * R)])
    arc = CircularPath((R, 0.0), 3 * R, 0.2, 2.0)
    for gauge in (SYM, GaugeChoice.string(1.0)):
        assert path_phase(SPEC, gauge, p.reversed()) == pytest.approx(-path_phase(SPEC, gauge, p), rel=1e-13)
        assert path_phase(SPEC, gauge, arc.reversed()) == pytest.approx(-path_phase(SPEC, gauge, arc), rel=1e-13)


def test_path_phase_is_state_independent():
    p = PolylinePath([(-3 * R, 1.0 * R), (4 * R, -1.0 * R)])
    vals = {path_phase(SPEC, SYM, p, ElectronState.from_voltage(v)) for v in (1e3, 1e4, 1e5)}
    assert len(vals) == 1


def test_singular_configurations_rejected():
    g = GaugeChoice.string(0.0)
    with pytest.raises(SingularPointError):
        path_phase(SPEC, g, PolylinePath([(3 * R, 0.0), (3 * R, 2 * R)]))
    with pytest.raises(SingularPointError):
        path_phase(SPEC, g, PolylinePath([(-R, 0.0), (R, 0.0)]))
    with pytest.raises(SingularPointError):
        ab_phase_loop(SPEC, g, CircularPath((0.0, 0.0), 2 * R, 0.0))


def test_open_and_closed_preconditions():
    with pytest.raises(PreconditionError):
        ab_phase_loop(SPEC, SYM, PolylinePath([(R, R), (2 * R, R)]))
    with pytest.raises(PreconditionError):
        path_phase(SPEC, SYM, CircularPath((0.0, 0.0), 2 * R))
    with pytest.raises(PreconditionError):
        PolylinePath([(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)])


def test_line_integral_units():
    path = CircularPath((0.0, 0.0), 2 * R, 0.5)
    assert line_integral(SPEC, SYM, path) == pytest.approx(SPEC.flux_phi_b, rel=1e-13)
