import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abphase.config import ConfigError, ExperimentConfig, format_config, parse_config
from abphase.constants import CONSTANTS


def test_defaults_are_the_worked_example():
    cfg = parse_config("")
    assert cfg.voltage == 10e3
    assert cfg.radius == 5e-6
    assert cfg.flux == CONSTANTS.flux_quantum
    assert cfg.flux_fraction == 1.0


def test_units_are_converted():
    cfg = parse_config(
        """
        # comment line
        voltage = 2.5 kV
        flux = 0.5 flux_quantum   # trailing comment
        radius = 3 um
        slit_spacing = 800 nm
        slit_width = 0.1 um
        string_angle = 90 deg
        string_angles = 0, 45, 90 deg
        momentum_factors = 0.5, 1
        grid = 512
        precision = double
        """
    )
    assert cfg.voltage == 2500.0
    assert cfg.flux == pytest.approx(CONSTANTS.flux_quantum / 2, rel=1e-15)
    assert cfg.radius == pytest.approx(3e-6)
    assert cfg.slit_spacing == pytest.approx(8e-7)
    assert cfg.string_angle == pytest.approx(math.pi / 2)
    assert cfg.string_angles == pytest.approx((0.0, math.pi / 4, math.pi / 2))
    assert cfg.momentum_factors == (0.5, 1.0)
    assert cfg.grid == 512 and cfg.precision == "double"


def test_flux_in_webers():
    assert parse_config("flux = 4.1356e-15 Wb").flux == 4.1356e-15


def test_unknown_key_rejected_with_position():
    with pytest.raises(ConfigError) as err:
        parse_config("voltage = 10 kV\n  colour = 3\n")
    assert err.value.line == 2 and err.value.column == 3
    assert "unknown key" in str(err.value)


def test_missing_unit_rejected():
    with pytest.raises(ConfigError, match="needs a unit"):
        parse_config("radius = 5")


def test_invalid_unit_rejected_with_column():
    with pytest.raises(ConfigError) as err:
        parse_config("radius = 5 inch")
    assert err.value.line == 1 and err.value.column == 12
    with pytest.raises(ConfigError):
        parse_config("voltage = 5 m")


def test_unitless_keys_reject_units():
    with pytest.raises(ConfigError):
        parse_config("grid = 512 m")
    with pytest.raises(ConfigError):
        parse_config("gauge = coulomb")


def test_malformed_and_duplicate_lines():
    with pytest.raises(ConfigError):
        parse_config("voltage 10 kV")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("grid = 512\ngrid = 256")


def test_semantic_validation():
    with pytest.raises(ConfigError):
        parse_config("slit_width = 2 um")
    with pytest.raises(ConfigError):
        parse_config("grid = 1000")
    with pytest.raises(ConfigError):
        parse_config("voltage = -1 kV")


@given(
    volts=st.floats(min_value=1.0, max_value=1e6),
    frac=st.floats(min_value=-3.0, max_value=3.0),
    radius=st.floats(min_value=1e-9, max_value=1e-3),
    angle=st.floats(min_value=-math.pi, max_value=math.pi),
    factors=st.lists(st.floats(min_value=0.01, max_value=4.0), min_size=1, max_size=4),
    gauge=st.sampled_from(["symmetric", "string"]),
)
def test_effective_config_round_trips_exactly(volts, frac, radius, angle, factors, gauge):
    cfg = ExperimentConfig(voltage=volts, flux=frac * CONSTANTS.flux_quantum, radius=radius,
                           string_angle=angle, momentum_factors=tuple(factors), gauge=gauge)
    assert parse_config(format_config(cfg)) == cfg
