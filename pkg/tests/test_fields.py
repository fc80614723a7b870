import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from abphase.constants import CONSTANTS
from abphase.errors import SingularPointError
from abphase.fields import (
    GaugeChoice,
    SolenoidSpec,
    apply_gauge,
    branch_angle,
    magnetic_field,
    on_string,
    potential_field,
    string_gauge_function,
    vector_potential,
)

R = 5e-6
SPEC = SolenoidSpec((1e-6, -2e-6), R, CONSTANTS.flux_quantum)
SYM = GaugeChoice.symmetric()

coords = st.floats(min_value=-40 * R, max_value=40 * R, allow_nan=False)
angles = st.floats(min_value=-math.pi, max_value=math.pi)


def test_worked_example_tangential_potential():
    spec = SolenoidSpec((0.0, 0.0), R, CONSTANTS.flux_quantum)
    # A(R) = (h/e) / (2 pi R) = 1.316e-10 Wb/m
    assert spec.A_theta == pytest.approx(1.3164239e-10, rel=1e-7)
    a = vector_potential(spec, SYM, (R, 0.0))
    assert a[0] == 0.0
    assert a[1] == pytest.approx(spec.A_theta, rel=1e-14)


def test_symmetric_gauge_is_counter_clockwise_and_falls_as_one_over_r():
    c = np.array(SPEC.center)
    for r in (2 * R, 5 * R, 20 * R):
        below = vector_potential(SPEC, SYM, c + (0.0, -r))
        assert below[0] > 0 and below[1] == 0.0
        assert np.hypot(*below) == pytest.approx(SPEC.flux_phi_b / (2 * math.pi * r), rel=1e-14)


def test_interior_potential_is_linear_and_continuous_at_boundary():
    c = np.array(SPEC.center)
    inside = vector_potential(SPEC, SYM, c + (0.0, 0.5 * R))
    assert np.hypot(*inside) == pytest.approx(0.5 * SPEC.A_theta, rel=1e-14)
    lo = vector_potential(SPEC, SYM, c + (R * (1 - 1e-12), 0.0))
    hi = vector_potential(SPEC, SYM, c + (R * (1 + 1e-12), 0.0))
    np.testing.assert_allclose(lo, hi, rtol=1e-10)


def test_center_value_is_zero():
    np.testing.assert_array_equal(vector_potential(SPEC, SYM, SPEC.center), [0.0, 0.0])


def test_field_inside_and_outside():
    c = np.array(SPEC.center)
    for gauge in (SYM, GaugeChoice.string(0.7)):
        inner = magnetic_field(SPEC, gauge, c + (0.3 * R, -0.2 * R))
        assert inner.value == pytest.approx(SPEC.interior_field, rel=1e-6)
        assert not inner.straddles_boundary
        outer = magnetic_field(SPEC, gauge, c + (-3 * R, -2 * R))
        assert abs(outer.value) < 1e-6 * SPEC.interior_field


def test_field_flags_boundary_straddle():
    c = np.array(SPEC.center)
    sample = magnetic_field(SPEC, SYM, c + (R, 0.0))
    assert sample.straddles_boundary


def test_string_gauge_vanishes_outside():
    gauge = GaugeChoice.string(1.0)
    c = np.array(SPEC.center)
    np.testing.assert_array_equal(vector_potential(SPEC, gauge, c + (-3 * R, 0.2 * R)), [0.0, 0.0])


def test_string_gauge_rejects_points_on_the_string():
    gauge = GaugeChoice.string(math.pi / 2)
    c = np.array(SPEC.center)
    with pytest.raises(SingularPointError):
        vector_potential(SPEC, gauge, c + (0.0, 7 * R))
    with pytest.raises(SingularPointError):
        vector_potential(SPEC, gauge, c)
    # the opposite ray is regular
    vector_potential(SPEC, gauge, c + (0.0, -7 * R))


@given(x=coords, y=coords, angle=angles)
def test_string_gauge_equals_symmetric_plus_gradient(x, y, angle):
    c = np.array(SPEC.center)
    p = c + (x, y)
    u = (math.cos(angle), math.sin(angle))
    r = math.hypot(x, y)
    assume(r > 0.05 * R and abs(r - R) > 1e-3 * R)
    across = abs(u[0] * y - u[1] * x)
    assume(across > 1e-3 * R or u[0] * x + u[1] * y < -1e-3 * R)
    chi = string_gauge_function(SPEC, u)
    gauged = apply_gauge(potential_field(SPEC, SYM), chi, step=1e-4 * R)
    direct = vector_potential(SPEC, GaugeChoice.string(angle), p)
    # central-difference truncation error grows like (step / r)^2 near the axis
    np.testing.assert_allclose(gauged(p), direct, rtol=1e-6, atol=1e-6 * SPEC.A_theta * R / max(r, R))


def test_apply_gauge_refuses_stencils_touching_the_cut():
    chi = string_gauge_function(SPEC, (1.0, 0.0))
    gauged = apply_gauge(potential_field(SPEC, SYM), chi, step=1e-9)
    c = np.array(SPEC.center)
    with pytest.raises(SingularPointError):
        gauged(c + (3 * R, 1e-10))


@given(angle=angles, theta=st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True))
def test_branch_angle_measured_from_string(angle, theta):
    u = (math.cos(angle), math.sin(angle))
    p = (math.cos(angle + theta), math.sin(angle + theta))
    got = float(branch_angle(p, (0.0, 0.0), u))
    diff = (got - theta + math.pi) % (2 * math.pi) - math.pi
    assert abs(diff) < 1e-9


def test_on_string_is_the_closed_forward_ray():
    u = (0.0, 1.0)
    pts = np.array([[0.0, 0.0], [0.0, 2.0], [0.0, -2.0], [1e-3, 2.0]])
    np.testing.assert_array_equal(on_string(pts, (0.0, 0.0), u, 1.0), [True, True, False, False])


def test_gauge_choice_validation():
    with pytest.raises(ValueError):
        GaugeChoice("lorenz")
    with pytest.raises(ValueError):
        GaugeChoice.string(0.0).__class__("string-offset", (0.0, 0.0))
    g = GaugeChoice("string-offset", (0.0, 3.0))
    assert g.string_direction == (0.0, 1.0)
    assert g.string_angle == pytest.approx(math.pi / 2)
