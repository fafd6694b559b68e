"""Mapping sessions: tracked device motion in, on-screen object motion out.

A session starts when the user engages (clutches in): the engine snapshots
the device pose and the object pose at that instant.  Each subsequent
tracker sample is turned into a screen-space displacement, scaled by the
per-channel gain laws, and folded into the object pose according to the
mapping kind:

  absolute  object = gained displacement from the engage pose, applied to
            the object pose captured at engage
  relative  object = gained displacement from the previous sample, applied
            to the previous object pose
  rate      object = gained displacement from the engage pose, applied to
            the previous object pose every tick (a per-tick velocity)

Translations and rotations are handled independently throughout; gains may
differ per channel and may be negative (egocentric control).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .errors import ConfigError, EngineError
from .gains import ConstantGain, GainSpec, SpeedGain, gain_value
from .geometry import (
    Channel,
    Pose,
    UnitQuat,
    Vec3,
    compose,
    inverse,
    pose_dist,
    quat_pow,
    rotate_vec,
)


class MappingKind(Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"
    RATE = "rate"


def parse_mapping_kind(text: str) -> MappingKind:
    try:
        return MappingKind(text.strip().lower())
    except ValueError:
        names = ", ".join(k.value for k in MappingKind)
        raise ConfigError(f"unknown mapping {text!r} (expected one of: {names})") from None


def _pose_is_finite(pose: Pose) -> bool:
    p, q = pose
    return (
        math.isfinite(p.x)
        and math.isfinite(p.y)
        and math.isfinite(p.z)
        and math.isfinite(q.w)
        and math.isfinite(q.x)
        and math.isfinite(q.y)
        and math.isfinite(q.z)
    )


@dataclass(frozen=True, slots=True)
class TrackerSample:
    """One tracker reading: tick number, device pose, time step, clutch state."""

    t: int
    pose: Pose
    dt: float
    engaged: bool = True

    def __post_init__(self) -> None:
        if self.t < 0:
            raise EngineError(f"sample tick must be >= 0, got {self.t}")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise EngineError(f"sample at tick {self.t} has non-positive dt {self.dt!r}")
        if not _pose_is_finite(self.pose):
            raise EngineError(f"sample at tick {self.t} has a non-finite pose")


class Displacement(NamedTuple):
    """A screen-space motion increment: translation vector plus rotation."""

    dv: Vec3
    dq: UnitQuat


@dataclass(frozen=True)
class MappingConfig:
    """Everything needed to open sessions: kind, per-channel gains, handedness.

    ego_t / ego_r flip the sign of the evaluated gain on their channel,
    turning allocentric control (object follows the device) into egocentric
    control (the scene moves against the device).
    """

    kind: MappingKind
    gain_t: GainSpec = field(default_factory=lambda: ConstantGain(1.0))
    gain_r: GainSpec = field(default_factory=lambda: ConstantGain(1.0))
    ego_t: bool = False
    ego_r: bool = False

    def __post_init__(self) -> None:
        if self.kind is not MappingKind.RELATIVE:
            for name, spec in (("gain-t", self.gain_t), ("gain-r", self.gain_r)):
                if isinstance(spec, SpeedGain):
                    raise ConfigError(
                        f"{name}: speed gain requires the relative mapping "
                        f"(got {self.kind.value})"
                    )


class Session:
    """Mutable state of one engaged mapping session."""

    __slots__ = (
        "kind",
        "gain_t",
        "gain_r",
        "sign_t",
        "sign_r",
        "pc0",
        "qc0",
        "pd0",
        "qd0",
        "prev_device",
        "object_pose",
        "start_t",
        "t",
        "engaged",
        "last_k_t",
        "last_k_r",
    )

    def __init__(
        self,
        kind: MappingKind,
        gain_t: GainSpec,
        gain_r: GainSpec,
        sign_t: float,
        sign_r: float,
        device: Pose,
        object_pose: Pose,
        start_tick: int,
    ) -> None:
        self.kind = kind
        self.gain_t = gain_t
        self.gain_r = gain_r
        self.sign_t = sign_t
        self.sign_r = sign_r
        self.pc0 = device.p
        self.qc0 = device.q
        self.pd0 = object_pose.p
        self.qd0 = object_pose.q
        self.prev_device = device
        self.object_pose = object_pose
        self.start_t = start_tick
        self.t = start_tick
        self.engaged = True
        self.last_k_t = 0.0
        self.last_k_r = 0.0


def engage(
    kind: MappingKind,
    gain_t: GainSpec,
    gain_r: GainSpec,
    device: Pose,
    object_pose: Pose,
    *,
    ego_t: bool = False,
    ego_r: bool = False,
    start_tick: int = 0,
) -> Session:
    """Open a session: snapshot the device and object poses, move nothing."""
    if kind is not MappingKind.RELATIVE:
        for name, spec in (("gain-t", gain_t), ("gain-r", gain_r)):
            if isinstance(spec, SpeedGain):
                raise ConfigError(
                    f"{name}: speed gain requires the relative mapping (got {kind.value})"
                )
    if not _pose_is_finite(device):
        raise EngineError("engage device pose is not finite")
    if not _pose_is_finite(object_pose):
        raise EngineError("engage object pose is not finite")
    return Session(
        kind,
        gain_t,
        gain_r,
        -1.0 if ego_t else 1.0,
        -1.0 if ego_r else 1.0,
        device,
        object_pose,
        start_tick,
    )


def engage_config(
    config: MappingConfig,
    device: Pose,
    object_pose: Pose,
    *,
    start_tick: int = 0,
) -> Session:
    return engage(
        config.kind,
        config.gain_t,
        config.gain_r,
        device,
        object_pose,
        ego_t=config.ego_t,
        ego_r=config.ego_r,
        start_tick=start_tick,
    )


def disengage(session: Session) -> Session:
    """Close the clutch.  The object stays where it is."""
    if not session.engaged:
        raise EngineError("session is already disengaged")
    session.engaged = False
    return session


def to_screen_space(dv: Vec3, dq: UnitQuat, q_ref: UnitQuat) -> Displacement:
    """Re-express a tracker-frame displacement in the screen frame.

    Both parts are conjugated by the inverse of the reference orientation,
    which is what makes device-forward mean screen-forward regardless of how
    the device is being held.
    """
    inv_ref = inverse(q_ref)
    return Displacement(
        rotate_vec(inv_ref, dv),
        compose(compose(inv_ref, dq), q_ref),
    )


def apply_gain(k: float, d: Displacement) -> Displacement:
    """Scale a displacement: translation linearly, rotation through its angle."""
    return Displacement(d.dv.scale(k), quat_pow(d.dq, k))


def eval_gain(spec: GainSpec, session: Session, sample: TrackerSample, channel: Channel) -> float:
    """Evaluate one gain law for the step the sample is about to drive."""
    ref0 = Pose(session.pc0, session.qc0)
    return gain_value(
        spec,
        d_start=pose_dist(sample.pose, ref0, channel),
        d_prev=pose_dist(sample.pose, session.prev_device, channel),
        dt=sample.dt,
        step_index=sample.t - session.start_t,
    )


def step(session: Session, sample: TrackerSample) -> Pose:
    """Advance the session by one tracker sample and return the object pose.

    Ticks must be contiguous: the sample's t has to be exactly one past the
    session's last tick.  The session is mutated in place.
    """
    if not session.engaged:
        raise EngineError(f"step at tick {sample.t}: session is disengaged")
    if sample.t != session.t + 1:
        raise EngineError(
            f"tick discontinuity: expected {session.t + 1}, got {sample.t}"
        )

    pc_t, qc_t = sample.pose
    kind = session.kind
    if kind is MappingKind.RELATIVE:
        ref_p, ref_q = session.prev_device
    else:
        ref_p = session.pc0
        ref_q = session.qc0

    disp = to_screen_space(pc_t.sub(ref_p), compose(qc_t, inverse(ref_q)), ref_q)
    k_t = session.sign_t * eval_gain(session.gain_t, session, sample, Channel.TRANSLATION)
    k_r = session.sign_r * eval_gain(session.gain_r, session, sample, Channel.ROTATION)

    if kind is MappingKind.ABSOLUTE:
        base_p = session.pd0
        base_q = session.qd0
    else:
        base_p, base_q = session.object_pose

    new_pose = Pose(
        base_p.add(disp.dv.scale(k_t)),
        compose(quat_pow(disp.dq, k_r), base_q),
    )
    session.object_pose = new_pose
    session.prev_device = sample.pose
    session.t = sample.t
    session.last_k_t = k_t
    session.last_k_r = k_r
    return new_pose


def step_relative_incremental(
    session: Session, dv_dev: Vec3, dq_dev: UnitQuat, dt: float
) -> Pose:
    """Feed a device-frame increment instead of an absolute sample.

    The increment is integrated onto the previous device pose and pushed
    through the normal relative step, so gain laws see the same distances
    either way.  Only defined for the relative mapping, where a step is by
    construction a function of the increment alone.
    """
    if not session.engaged:
        raise EngineError("incremental step: session is disengaged")
    if session.kind is not MappingKind.RELATIVE:
        raise EngineError(
            f"incremental stepping is defined for the relative mapping only "
            f"(session is {session.kind.value})"
        )
    prev_p, prev_q = session.prev_device
    pc_t = prev_p.add(rotate_vec(prev_q, dv_dev))
    qc_t = compose(prev_q, dq_dev)
    return step(session, TrackerSample(session.t + 1, Pose(pc_t, qc_t), dt))
