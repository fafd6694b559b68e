import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from motionmap.errors import ConfigError
from motionmap.gains import (
    ConstantGain,
    DeadbandGain,
    DistanceGain,
    ScheduleGain,
    SpeedGain,
    format_gain_spec,
    gain_value,
    parse_gain_spec,
)


def ev(spec, *, d_start=0.0, d_prev=0.0, dt=1.0 / 60.0, step_index=1):
    return gain_value(spec, d_start=d_start, d_prev=d_prev, dt=dt, step_index=step_index)


def test_constant_ignores_distances():
    k = ConstantGain(1.7)
    assert ev(k, d_start=0.0) == 1.7
    assert ev(k, d_start=123.0, d_prev=9.0, step_index=40) == 1.7


def test_deadband_zero_inside_threshold():
    g = DeadbandGain(0.5)
    assert ev(g, d_start=0.0) == 0.0
    assert ev(g, d_start=0.2) == 0.0
    # the threshold itself is still inside the dead zone
    assert ev(g, d_start=0.5) == 0.0


def test_deadband_passes_excess_through():
    g = DeadbandGain(0.5)
    assert ev(g, d_start=0.8) == (0.8 - 0.5) / 0.8
    # far out the gain approaches 1
    assert ev(g, d_start=500.0) == (500.0 - 0.5) / 500.0


def test_deadband_excess_is_exact_displacement():
    # gain * d == d - threshold, which is the point of the formula
    g = DeadbandGain(0.25)
    for d in (0.3, 0.7, 2.0):
        assert ev(g, d_start=d) * d == pytest.approx(d - 0.25, abs=1e-15)


def test_distance_gain_formula():
    g = DistanceGain(0.2, 1.1, 1.3)
    assert ev(g, d_start=0.7) == 0.2 + 1.1 * 0.7**1.3
    assert ev(g, d_start=0.0) == 0.2


def test_speed_gain_formula():
    g = SpeedGain(0.1, 2.0, 0.8)
    dt = 1.0 / 60.0
    assert ev(g, d_prev=0.3, dt=dt) == 0.1 + 2.0 * (0.3 / dt) ** 0.8
    assert ev(g, d_prev=0.0, dt=dt) == 0.1


def test_schedule_indexing_and_hold():
    g = ScheduleGain((2.0, 0.5, 0.25))
    assert ev(g, step_index=1) == 2.0
    assert ev(g, step_index=2) == 0.5
    assert ev(g, step_index=3) == 0.25
    # past the end the last value holds
    assert ev(g, step_index=4) == 0.25
    assert ev(g, step_index=100) == 0.25
    # degenerate indices clamp to the first entry
    assert ev(g, step_index=0) == 2.0


SPECS = [
    ConstantGain(1.0),
    ConstantGain(-2.5),
    DeadbandGain(0.0),
    DeadbandGain(0.35),
    DistanceGain(0.2, 1.0, 1.3),
    SpeedGain(0.1, 2.0, 0.8),
    ScheduleGain((1.0,)),
    ScheduleGain((2.0, 0.5, 0.25)),
]


@pytest.mark.parametrize("spec", SPECS, ids=format_gain_spec)
def test_format_parse_round_trip(spec):
    assert parse_gain_spec(format_gain_spec(spec)) == spec


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_constant_round_trips_any_float(k):
    spec = ConstantGain(k)
    assert parse_gain_spec(format_gain_spec(spec)) == spec


def test_parse_is_forgiving_about_case_and_space():
    assert parse_gain_spec("  Constant:2  ") == ConstantGain(2.0)
    assert parse_gain_spec("DEADBAND:0.1") == DeadbandGain(0.1)


def test_parse_rejects_malformed_specs():
    for text in (
        "constant",          # no parameters at all
        "constant:",         # empty parameter list
        "constant:1,2",      # too many
        "distance:1,2",      # too few
        "schedule:",         # a schedule needs values
        "constant:abc",      # not a number
        "warp:1",            # unknown law
        "",
    ):
        with pytest.raises(ConfigError):
            parse_gain_spec(text)


def test_constructors_validate_parameters():
    with pytest.raises(ConfigError):
        DeadbandGain(-0.1)
    with pytest.raises(ConfigError):
        DistanceGain(0.0, -1.0, 1.0)
    with pytest.raises(ConfigError):
        DistanceGain(0.0, 1.0, 0.0)
    with pytest.raises(ConfigError):
        SpeedGain(0.0, -0.5, 1.0)
    with pytest.raises(ConfigError):
        SpeedGain(0.0, 1.0, -2.0)
    with pytest.raises(ConfigError):
        ScheduleGain(())
    with pytest.raises(ConfigError):
        ConstantGain(math.nan)
    with pytest.raises(ConfigError):
        ScheduleGain((1.0, math.inf))
