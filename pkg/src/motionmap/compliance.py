"""Compliance lab: empirical checks of the motion-mapping behavior.

Three properties are probed, per motion channel where that makes sense:

  directional   every object step is a scalar multiple of the device step,
                expressed in the frame the device had before the step
  transitivity  visiting waypoints stepwise lands the object exactly where
                jumping straight to the last waypoint would
  nulling       returning the device to its engage pose returns the object
                to its engage pose

classify() runs randomized trials of all three against one mapping kind and
grades each property cell as always / conditional / never.  "conditional"
means the general randomized family fails but a documented restricted
family passes; every non-"always" cell carries a replayable counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError
from .engine import (
    MappingConfig,
    MappingKind,
    TrackerSample,
    engage_config,
    step,
)
from .gains import ConstantGain, ScheduleGain
from .geometry import (
    Channel,
    IDENTITY_POSE,
    Pose,
    UnitQuat,
    Vec3,
    compose,
    from_axis_angle,
    inverse,
    pose_dist,
    quat_dist,
    rotate_vec,
    rotation_angle,
    rotation_axis,
)
from .replay import replay
from .traces import Trace, random_unit_quat, random_unit_vec, trace_from_poses

# Device steps smaller than this carry no direction information; the verdict
# for such a step is vacuously compliant.
_DEGENERATE_STEP = 1e-12

_DT = 1.0 / 60.0


@dataclass(frozen=True)
class StepVerdict:
    t: int
    compliant_t: bool
    compliant_r: bool
    alpha: float
    beta: float
    residual_t: float
    residual_r: float


def step_verdict(
    prev_device: Pose,
    device: Pose,
    prev_object: Pose,
    obj: Pose,
    tol: float,
    t: int = 0,
) -> StepVerdict:
    """Grade one step against the directional compliance predicate.

    The device step is re-expressed in the device frame before the step;
    compliance on a channel means the object step is some scalar multiple
    (alpha for translation, beta through the rotation angle) of that.
    """
    inv_prev = inverse(prev_device.q)
    u = rotate_vec(inv_prev, device.p.sub(prev_device.p))
    v = obj.p.sub(prev_object.p)
    un = u.norm()
    vn = v.norm()
    if un < _DEGENERATE_STEP or vn < _DEGENERATE_STEP:
        compliant_t, alpha, residual_t = True, 0.0, 0.0
    else:
        residual_t = u.cross(v).norm() / (un * vn)
        compliant_t = residual_t <= tol
        alpha = u.dot(v) / (un * un)

    dq_dev = compose(compose(inv_prev, compose(device.q, inv_prev)), prev_device.q)
    dq_obj = compose(obj.q, inverse(prev_object.q))
    ang_dev = rotation_angle(dq_dev)
    ang_obj = rotation_angle(dq_obj)
    if ang_dev < _DEGENERATE_STEP or ang_obj < _DEGENERATE_STEP:
        compliant_r, beta, residual_r = True, 0.0, 0.0
    else:
        axis_dev = rotation_axis(dq_dev)
        axis_obj = rotation_axis(dq_obj)
        if axis_dev is None or axis_obj is None:
            compliant_r, beta, residual_r = True, 0.0, 0.0
        else:
            d = axis_dev.dot(axis_obj)
            residual_r = 1.0 - abs(d)
            compliant_r = residual_r <= tol
            beta = (ang_obj / ang_dev) if d >= 0.0 else -(ang_obj / ang_dev)

    return StepVerdict(t, compliant_t, compliant_r, alpha, beta, residual_t, residual_r)


def directional_verdicts(
    device: Sequence[Pose],
    objects: Sequence[Pose],
    tol: float,
    ticks: Sequence[int] | None = None,
) -> list[StepVerdict]:
    """Per-step verdicts for aligned device / object pose sequences."""
    if len(device) != len(objects):
        raise ConfigError(
            f"device and object sequences differ in length ({len(device)} vs {len(objects)})"
        )
    if len(device) < 2:
        raise ConfigError("need at least two aligned poses to grade steps")
    out = []
    for i in range(1, len(device)):
        t = ticks[i] if ticks is not None else i
        out.append(step_verdict(device[i - 1], device[i], objects[i - 1], objects[i], tol, t))
    return out


def _run_waypoints(config: MappingConfig, waypoints: Sequence[Pose]) -> Pose:
    session = engage_config(config, waypoints[0], IDENTITY_POSE)
    for i, wp in enumerate(waypoints[1:], 1):
        step(session, TrackerSample(i, wp, _DT))
    return session.object_pose


def transitivity_check(
    config: MappingConfig, waypoints: Sequence[Pose], tol: float
) -> tuple[bool, tuple[float, float]]:
    """Stepwise through all waypoints vs a single jump to the last one.

    Returns (ok, (translation error, rotation error)).
    """
    if len(waypoints) < 2:
        raise ConfigError("transitivity needs at least two waypoints")
    stepwise = _run_waypoints(config, waypoints)
    direct = _run_waypoints(config, [waypoints[0], waypoints[-1]])
    err_t = pose_dist(stepwise, direct, Channel.TRANSLATION)
    err_r = pose_dist(stepwise, direct, Channel.ROTATION)
    return (err_t <= tol and err_r <= tol, (err_t, err_r))


def nulling_check(config: MappingConfig, samples: Sequence[TrackerSample], tol: float) -> bool:
    """Does a loop trace (device back at its engage pose) null the object?

    The trace must genuinely return: endpoints further apart than 1e-12 on
    either channel are a usage error, not a verdict.
    """
    if len(samples) < 2:
        raise ConfigError("nulling needs a trace with at least two samples")
    first = samples[0].pose
    last = samples[-1].pose
    if (
        pose_dist(first, last, Channel.TRANSLATION) > 1e-12
        or pose_dist(first, last, Channel.ROTATION) > 1e-12
    ):
        raise ConfigError("nulling trace does not return to its start pose")
    session = engage_config(config, first, IDENTITY_POSE, start_tick=samples[0].t)
    for s in samples[1:]:
        step(session, s)
    final = session.object_pose
    return (
        pose_dist(final, IDENTITY_POSE, Channel.TRANSLATION) <= tol
        and pose_dist(final, IDENTITY_POSE, Channel.ROTATION) <= tol
    )


@dataclass(frozen=True)
class EquivalenceResult:
    """How closely absolute and relative agree at rotation gain -1."""

    max_pair_dist: float
    max_closed_form_dist: float
    max_world_drift: float
    ok: bool


def k_minus1_equivalence(trajectory: Sequence[Pose], tol: float) -> EquivalenceResult:
    """Check the gain -1 collapse on a rotation trajectory.

    At rotation gain -1 the absolute and relative mappings produce the same
    object orientation, the closed form (qc_t^-1 qc_0) qd_0, and the
    composition of device and object orientations stays constant (the
    object appears fixed in the world as the device frame rotates).
    """
    if len(trajectory) < 2:
        raise ConfigError("equivalence needs at least two poses")
    qd0 = IDENTITY_POSE.q
    cfg_abs = MappingConfig(MappingKind.ABSOLUTE, ConstantGain(1.0), ConstantGain(-1.0))
    cfg_rel = MappingConfig(MappingKind.RELATIVE, ConstantGain(1.0), ConstantGain(-1.0))
    s_abs = engage_config(cfg_abs, trajectory[0], IDENTITY_POSE)
    s_rel = engage_config(cfg_rel, trajectory[0], IDENTITY_POSE)
    qc0 = trajectory[0].q
    world0 = compose(qc0, qd0)
    max_pair = 0.0
    max_closed = 0.0
    max_world = 0.0
    for i, pose in enumerate(trajectory[1:], 1):
        sample = TrackerSample(i, pose, _DT)
        qa = step(s_abs, sample).q
        qr = step(s_rel, sample).q
        closed = compose(compose(inverse(pose.q), qc0), qd0)
        d_pair = quat_dist(qa, qr)
        d_closed = quat_dist(qa, closed)
        d_world = quat_dist(compose(pose.q, qa), world0)
        if d_pair > max_pair:
            max_pair = d_pair
        if d_closed > max_closed:
            max_closed = d_closed
        if d_world > max_world:
            max_world = d_world
    ok = max_pair <= tol and max_closed <= tol and max_world <= tol
    return EquivalenceResult(max_pair, max_closed, max_world, ok)


# ---------------------------------------------------------------------------
# Randomized classification


@dataclass(frozen=True)
class Counterexample:
    """A failing trial, replayable on its own: config plus device trace."""

    check: str  # directional | transitivity | nulling
    channel: str  # translation | rotation | pose
    config: MappingConfig
    trace: Trace


@dataclass(frozen=True)
class CellVerdict:
    verdict: str  # always | conditional | never
    condition: str
    general_pass: int
    general_fail: int
    restricted_pass: int
    restricted_fail: int
    counterexample: Counterexample | None


@dataclass(frozen=True)
class ComplianceReport:
    mapping: MappingKind
    seed: int
    trials: int
    tol: float
    cells: dict[str, CellVerdict]  # keyed by e.g. "directional translation"


CELL_KEYS = (
    "directional translation",
    "directional rotation",
    "transitivity translation",
    "transitivity rotation",
    "nulling pose",
)


def _signed_gain(rng: random.Random) -> float:
    # magnitude kept away from zero so object steps stay measurable
    return rng.choice((-1.0, 1.0)) * rng.uniform(0.05, 3.0)


def _schedule(rng: random.Random, n: int) -> ScheduleGain:
    return ScheduleGain(tuple(_signed_gain(rng) for _ in range(n)))


def _cube_point(rng: random.Random) -> Vec3:
    return Vec3(rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25))


def _walk_rotation(rng: random.Random, q: UnitQuat, max_angle: float = 0.3) -> UnitQuat:
    return compose(from_axis_angle(random_unit_vec(rng), rng.uniform(0.0, max_angle)), q)


def _general_trajectory(rng: random.Random, n: int) -> list[Pose]:
    q = random_unit_quat(rng)
    poses = [Pose(_cube_point(rng), q)]
    for _ in range(n):
        q = _walk_rotation(rng, q)
        poses.append(Pose(_cube_point(rng), q))
    return poses


def _translation_only(rng: random.Random, n: int) -> list[Pose]:
    q = random_unit_quat(rng)
    return [Pose(_cube_point(rng), q) for _ in range(n + 1)]


def _rotation_only(rng: random.Random, n: int) -> list[Pose]:
    p = _cube_point(rng)
    q = random_unit_quat(rng)
    poses = [Pose(p, q)]
    for _ in range(n):
        q = _walk_rotation(rng, q)
        poses.append(Pose(p, q))
    return poses


def _single_axis_translation(rng: random.Random, n: int) -> list[Pose]:
    q = random_unit_quat(rng)
    origin = _cube_point(rng)
    axis = random_unit_vec(rng)
    return [Pose(origin.add(axis.scale(rng.uniform(-0.25, 0.25))), q) for _ in range(n + 1)]


def _single_axis_rotation(rng: random.Random, n: int) -> list[Pose]:
    p = _cube_point(rng)
    q0 = random_unit_quat(rng)
    axis = random_unit_vec(rng)
    theta = 0.0
    poses = [Pose(p, q0)]
    for _ in range(n):
        theta += rng.uniform(-0.3, 0.3)
        poses.append(Pose(p, compose(from_axis_angle(axis, theta), q0)))
    return poses


def _loop_trajectory(rng: random.Random, n: int) -> list[Pose]:
    poses = _general_trajectory(rng, n - 1)
    poses.append(poses[0])  # exact return, bit for bit
    return poses


def _palindrome_translation(rng: random.Random, half: int) -> list[Pose]:
    q = random_unit_quat(rng)
    out = [Pose(_cube_point(rng), q) for _ in range(half + 1)]
    return out + out[-2::-1]


def _directional_trial(
    config: MappingConfig, poses: list[Pose], tol: float
) -> tuple[bool, bool]:
    trace = trace_from_poses(poses, dt=_DT)
    result = replay(trace, config)
    objects = [pose for _, pose in result.object_trace]
    verdicts = directional_verdicts(poses, objects, tol)
    return (all(v.compliant_t for v in verdicts), all(v.compliant_r for v in verdicts))


@dataclass
class _Tally:
    condition: str = ""
    general_pass: int = 0
    general_fail: int = 0
    restricted_pass: int = 0
    restricted_fail: int = 0
    counterexample: Counterexample | None = None

    def record_general(self, ok: bool, ce: Counterexample | None) -> None:
        if ok:
            self.general_pass += 1
        else:
            self.general_fail += 1
            if self.counterexample is None:
                self.counterexample = ce

    def record_restricted(self, ok: bool) -> None:
        if ok:
            self.restricted_pass += 1
        else:
            self.restricted_fail += 1

    def verdict(self) -> CellVerdict:
        if self.general_fail == 0:
            v = "always"
        elif self.restricted_pass > 0 and self.restricted_fail == 0:
            v = "conditional"
        else:
            v = "never"
        return CellVerdict(
            v,
            self.condition if v == "conditional" else "",
            self.general_pass,
            self.general_fail,
            self.restricted_pass,
            self.restricted_fail,
            self.counterexample if v != "always" else None,
        )


_CONDITIONS = {
    (MappingKind.ABSOLUTE, "directional translation"):
        "constant gain and device orientation held at its engage value",
    (MappingKind.ABSOLUTE, "directional rotation"):
        "rotation gain -1, or all rotations about a single axis",
    (MappingKind.RELATIVE, "transitivity translation"):
        "constant gain and no device rotation",
    (MappingKind.RELATIVE, "transitivity rotation"):
        "rotation gain -1",
    (MappingKind.RELATIVE, "nulling pose"):
        "constant gain, no rotation, and the return path retraces the outbound path",
    (MappingKind.RATE, "directional translation"):
        "all translations along a single axis with orientation held at its engage value",
    (MappingKind.RATE, "directional rotation"):
        "all rotations about a single axis",
}


def classify(
    kind: MappingKind,
    *,
    seed: int = 42,
    trials: int = 1000,
    tol: float = 1e-9,
) -> ComplianceReport:
    """Randomized grading of one mapping kind against all property cells."""
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if not tol > 0.0:
        raise ConfigError("tol must be > 0")
    rng = random.Random(f"{seed}:{kind.value}")
    n_steps = 12
    restricted_trials = min(trials, 200)

    tallies = {key: _Tally(condition=_CONDITIONS.get((kind, key), "")) for key in CELL_KEYS}

    # -- directional, general family: anything goes
    for _ in range(trials):
        poses = _general_trajectory(rng, n_steps)
        config = MappingConfig(kind, _schedule(rng, n_steps), _schedule(rng, n_steps))
        ok_t, ok_r = _directional_trial(config, poses, tol)
        trace = trace_from_poses(poses, dt=_DT)
        tallies["directional translation"].record_general(
            ok_t, Counterexample("directional", "translation", config, trace)
        )
        tallies["directional rotation"].record_general(
            ok_r, Counterexample("directional", "rotation", config, trace)
        )

    # -- directional, restricted families
    for i in range(restricted_trials):
        if kind is MappingKind.ABSOLUTE:
            k = ConstantGain(_signed_gain(rng))
            ok_t, _ = _directional_trial(
                MappingConfig(kind, k, k), _translation_only(rng, n_steps), tol
            )
            tallies["directional translation"].record_restricted(ok_t)
            if i % 2 == 0:
                cfg = MappingConfig(kind, ConstantGain(1.0), ConstantGain(-1.0))
                _, ok_r = _directional_trial(cfg, _rotation_only(rng, n_steps), tol)
            else:
                cfg = MappingConfig(kind, _schedule(rng, n_steps), _schedule(rng, n_steps))
                _, ok_r = _directional_trial(cfg, _single_axis_rotation(rng, n_steps), tol)
            tallies["directional rotation"].record_restricted(ok_r)
        elif kind is MappingKind.RATE:
            cfg = MappingConfig(kind, _schedule(rng, n_steps), _schedule(rng, n_steps))
            ok_t, _ = _directional_trial(cfg, _single_axis_translation(rng, n_steps), tol)
            tallies["directional translation"].record_restricted(ok_t)
            cfg = MappingConfig(kind, _schedule(rng, n_steps), _schedule(rng, n_steps))
            _, ok_r = _directional_trial(cfg, _single_axis_rotation(rng, n_steps), tol)
            tallies["directional rotation"].record_restricted(ok_r)

    # -- transitivity, general family: full-pose waypoints, constant gain
    for _ in range(trials):
        waypoints = _general_trajectory(rng, 4)
        config = MappingConfig(kind, ConstantGain(_signed_gain(rng)), ConstantGain(_signed_gain(rng)))
        _, (err_t, err_r) = transitivity_check(config, waypoints, tol)
        trace = trace_from_poses(waypoints, dt=_DT)
        tallies["transitivity translation"].record_general(
            err_t <= tol, Counterexample("transitivity", "translation", config, trace)
        )
        tallies["transitivity rotation"].record_general(
            err_r <= tol, Counterexample("transitivity", "rotation", config, trace)
        )

    # -- transitivity, restricted families (relative mapping only)
    if kind is MappingKind.RELATIVE:
        for _ in range(restricted_trials):
            k = ConstantGain(_signed_gain(rng))
            _, (err_t, _unused) = transitivity_check(
                MappingConfig(kind, k, k), _translation_only(rng, 4), tol
            )
            tallies["transitivity translation"].record_restricted(err_t <= tol)
            cfg = MappingConfig(kind, ConstantGain(1.0), ConstantGain(-1.0))
            _, (_unused, err_r) = transitivity_check(cfg, _rotation_only(rng, 4), tol)
            tallies["transitivity rotation"].record_restricted(err_r <= tol)

    # -- nulling, general family: loop trace, per-step gains, rotations included
    for _ in range(trials):
        poses = _loop_trajectory(rng, 10)
        config = MappingConfig(kind, _schedule(rng, 10), _schedule(rng, 10))
        trace = trace_from_poses(poses, dt=_DT)
        ok = nulling_check(config, trace.samples, tol)
        tallies["nulling pose"].record_general(
            ok, Counterexample("nulling", "pose", config, trace)
        )

    # -- nulling, restricted family (relative mapping only)
    if kind is MappingKind.RELATIVE:
        for _ in range(restricted_trials):
            poses = _palindrome_translation(rng, 5)
            k = ConstantGain(_signed_gain(rng))
            config = MappingConfig(kind, k, k)
            trace = trace_from_poses(poses, dt=_DT)
            tallies["nulling pose"].record_restricted(nulling_check(config, trace.samples, tol))

    cells = {key: tally.verdict() for key, tally in tallies.items()}
    return ComplianceReport(kind, seed, trials, tol, cells)


@dataclass(frozen=True)
class CheckOutcome:
    """What a single-trace directional / nulling check found."""

    config: MappingConfig
    tol: float
    segments: int
    steps: int
    noncompliant_t: int
    noncompliant_r: int
    worst_residual_t: float
    worst_tick_t: int
    worst_residual_r: float
    worst_tick_r: int
    nulling: str  # pass | fail | n/a


def check_trace(trace: Trace, config: MappingConfig, tol: float) -> CheckOutcome:
    """Replay a trace and grade directional compliance step by step.

    Verdicts are computed within each engaged segment (steps across a clutch
    gap have no defined relation).  Nulling is graded only when the trace is
    a single engaged loop that returns to its start pose; otherwise 'n/a'.
    """
    from .replay import engaged_segments

    result = replay(trace, config)
    obj_by_tick = dict(result.object_trace)
    segments = [seg for seg in engaged_segments(trace) if len(seg) >= 2]
    nc_t = nc_r = 0
    steps = 0
    worst_t = (0.0, -1)
    worst_r = (0.0, -1)
    for seg in segments:
        dev = [s.pose for s in seg]
        objs = [obj_by_tick[s.t] for s in seg]
        ticks = [s.t for s in seg]
        for v in directional_verdicts(dev, objs, tol, ticks):
            steps += 1
            if not v.compliant_t:
                nc_t += 1
            if not v.compliant_r:
                nc_r += 1
            if v.residual_t > worst_t[0]:
                worst_t = (v.residual_t, v.t)
            if v.residual_r > worst_r[0]:
                worst_r = (v.residual_r, v.t)

    nulling = "n/a"
    if len(segments) == 1 and segments[0][0].t == trace.samples[0].t and len(
        segments[0]
    ) == len(trace.samples):
        seg = segments[0]
        first, last = seg[0].pose, seg[-1].pose
        if (
            pose_dist(first, last, Channel.TRANSLATION) <= 1e-12
            and pose_dist(first, last, Channel.ROTATION) <= 1e-12
        ):
            nulling = "pass" if nulling_check(config, seg, tol) else "fail"

    return CheckOutcome(
        config,
        tol,
        len(segments),
        steps,
        nc_t,
        nc_r,
        worst_t[0],
        worst_t[1],
        worst_r[0],
        worst_r[1],
        nulling,
    )


def rerun_counterexample(ce: Counterexample, tol: float) -> bool:
    """Replay a stored counterexample.  True when the violation reproduces."""
    poses = [s.pose for s in ce.trace.samples]
    if ce.check == "directional":
        ok_t, ok_r = _directional_trial(ce.config, poses, tol)
        return not (ok_t if ce.channel == "translation" else ok_r)
    if ce.check == "transitivity":
        _, (err_t, err_r) = transitivity_check(ce.config, poses, tol)
        return (err_t if ce.channel == "translation" else err_r) > tol
    if ce.check == "nulling":
        return not nulling_check(ce.config, ce.trace.samples, tol)
    raise ConfigError(f"unknown counterexample check {ce.check!r}")
