"""Gain laws: how strongly device displacement drives object displacement.

A gain spec is a small frozen dataclass; evaluation happens per step against
the distances the device has covered.  Translation distances are meters,
rotation distances radians, and the same law can be attached to either
channel.  Specs have a compact text form (for the CLI and for reports) that
round-trips through parse_gain_spec / format_gain_spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import ConfigError


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ConfigError(f"gain parameter {name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ConstantGain:
    """Fixed gain k, the classic position-control setting."""

    k: float

    def __post_init__(self) -> None:
        _require_finite("k", self.k)


@dataclass(frozen=True)
class DeadbandGain:
    """Zero inside the threshold, then scales out the excess displacement.

    Evaluated on the distance d from the engage pose: the gain is
    (d - threshold) / d once d exceeds the threshold, so the object covers
    exactly the displacement beyond the dead zone.
    """

    threshold: float

    def __post_init__(self) -> None:
        _require_finite("threshold", self.threshold)
        if self.threshold < 0.0:
            raise ConfigError("deadband threshold must be >= 0")


@dataclass(frozen=True)
class DistanceGain:
    """a + b * d^c where d is the distance from the engage pose."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        _require_finite("a", self.a)
        _require_finite("b", self.b)
        _require_finite("c", self.c)
        if self.b < 0.0:
            raise ConfigError("distance gain coefficient b must be >= 0")
        if self.c <= 0.0:
            raise ConfigError("distance gain exponent c must be > 0")


@dataclass(frozen=True)
class SpeedGain:
    """a + b * s^c where s is the device speed over the last step.

    Speed is distance from the previous sample divided by the sample dt.
    Only meaningful when each step is measured against the previous device
    pose, so sessions reject it for mappings measured from the engage pose.
    """

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        _require_finite("a", self.a)
        _require_finite("b", self.b)
        _require_finite("c", self.c)
        if self.b < 0.0:
            raise ConfigError("speed gain coefficient b must be >= 0")
        if self.c <= 0.0:
            raise ConfigError("speed gain exponent c must be > 0")


@dataclass(frozen=True)
class ScheduleGain:
    """Explicit per-step gain values, indexed by the step number since engage.

    Step n uses values[n-1]; once the schedule runs out the last value holds.
    Mostly a harness tool: it lets test traffic exercise arbitrary per-tick
    gain functions through the same code path as the analytic laws.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise ConfigError("gain schedule must not be empty")
        for i, v in enumerate(self.values):
            _require_finite(f"values[{i}]", v)


GainSpec = Union[ConstantGain, DeadbandGain, DistanceGain, SpeedGain, ScheduleGain]


def gain_value(
    spec: GainSpec,
    *,
    d_start: float,
    d_prev: float,
    dt: float,
    step_index: int,
) -> float:
    """Evaluate a gain law for one step.

    d_start is the device distance from the engage pose, d_prev the distance
    from the previous sample, both on the channel being driven.  step_index
    counts steps since engage, starting at 1.
    """
    if isinstance(spec, ConstantGain):
        return spec.k
    if isinstance(spec, DeadbandGain):
        if d_start <= spec.threshold:
            return 0.0
        return (d_start - spec.threshold) / d_start
    if isinstance(spec, DistanceGain):
        return spec.a + spec.b * d_start**spec.c
    if isinstance(spec, SpeedGain):
        return spec.a + spec.b * (d_prev / dt) ** spec.c
    if isinstance(spec, ScheduleGain):
        i = step_index - 1
        if i < 0:
            i = 0
        elif i >= len(spec.values):
            i = len(spec.values) - 1
        return spec.values[i]
    raise ConfigError(f"unknown gain spec type {type(spec).__name__}")


def format_gain_spec(spec: GainSpec) -> str:
    """Compact text form, e.g. 'constant:1.5' or 'distance:0.2,1.0,1.3'."""
    if isinstance(spec, ConstantGain):
        return f"constant:{spec.k!r}"
    if isinstance(spec, DeadbandGain):
        return f"deadband:{spec.threshold!r}"
    if isinstance(spec, DistanceGain):
        return f"distance:{spec.a!r},{spec.b!r},{spec.c!r}"
    if isinstance(spec, SpeedGain):
        return f"speed:{spec.a!r},{spec.b!r},{spec.c!r}"
    if isinstance(spec, ScheduleGain):
        return "schedule:" + ",".join(repr(v) for v in spec.values)
    raise ConfigError(f"unknown gain spec type {type(spec).__name__}")


def parse_gain_spec(text: str) -> GainSpec:
    """Inverse of format_gain_spec.  Raises ConfigError on anything else."""
    name, sep, rest = text.strip().partition(":")
    name = name.strip().lower()
    if not sep and name not in ("",):
        raise ConfigError(f"gain spec {text!r} is missing parameters (expected name:args)")
    try:
        args = [float(a) for a in rest.split(",")] if rest.strip() else []
    except ValueError as e:
        raise ConfigError(f"gain spec {text!r}: {e}") from None

    def arity(n: int) -> None:
        if len(args) != n:
            raise ConfigError(f"gain spec {text!r}: expected {n} parameter(s), got {len(args)}")

    if name == "constant":
        arity(1)
        return ConstantGain(args[0])
    if name == "deadband":
        arity(1)
        return DeadbandGain(args[0])
    if name == "distance":
        arity(3)
        return DistanceGain(args[0], args[1], args[2])
    if name == "speed":
        arity(3)
        return SpeedGain(args[0], args[1], args[2])
    if name == "schedule":
        if not args:
            raise ConfigError(f"gain spec {text!r}: schedule needs at least one value")
        return ScheduleGain(tuple(args))
    raise ConfigError(f"unknown gain law {name!r}")
