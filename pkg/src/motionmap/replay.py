"""Drive mapping sessions from recorded traces."""

from __future__ import annotations

from dataclasses import dataclass

from .engine import MappingConfig, TrackerSample, disengage, engage_config, step
from .geometry import Channel, IDENTITY_POSE, Pose, pose_dist
from .traces import Trace


@dataclass(frozen=True)
class TraceMetrics:
    """Summary statistics over the engaged portion of a replayed trace."""

    duration_s: float
    steps: int
    clutch_count: int
    path_len_t: float
    path_len_r: float
    mean_step_t: float
    mean_step_r: float
    max_excursion_t: float
    max_excursion_r: float


@dataclass(frozen=True)
class ReplayResult:
    object_trace: tuple[tuple[int, Pose], ...]
    gains: tuple[tuple[int, float, float], ...]
    metrics: TraceMetrics


def engaged_segments(trace: Trace) -> list[list[TrackerSample]]:
    """Contiguous runs of engaged samples, in trace order."""
    segments: list[list[TrackerSample]] = []
    current: list[TrackerSample] | None = None
    for s in trace.samples:
        if s.engaged:
            if current is None:
                current = []
                segments.append(current)
            current.append(s)
        else:
            current = None
    return segments


def replay(trace: Trace, config: MappingConfig, *, object_start: Pose = IDENTITY_POSE) -> ReplayResult:
    """Run a trace through the engine.

    Every transition into the engaged state opens a fresh session at that
    sample (the object does not move on the engage tick); every transition
    out closes it.  The object pose carries over across clutch gaps.
    """
    session = None
    obj = object_start
    rows: list[tuple[int, Pose]] = []
    gain_rows: list[tuple[int, float, float]] = []
    clutches = 0
    pending_reengage = False
    duration = 0.0
    path_t = path_r = 0.0
    exc_t = exc_r = 0.0
    steps = 0

    for i, s in enumerate(trace.samples):
        if i > 0:
            duration += s.dt
        if s.engaged:
            if session is None or not session.engaged:
                if pending_reengage:
                    clutches += 1
                    pending_reengage = False
                session = engage_config(config, s.pose, obj, start_tick=s.t)
                rows.append((s.t, obj))
            else:
                prev_pose = session.prev_device
                engage_pose = Pose(session.pc0, session.qc0)
                obj = step(session, s)
                rows.append((s.t, obj))
                gain_rows.append((s.t, session.last_k_t, session.last_k_r))
                steps += 1
                path_t += pose_dist(s.pose, prev_pose, Channel.TRANSLATION)
                path_r += pose_dist(s.pose, prev_pose, Channel.ROTATION)
                dt_e = pose_dist(s.pose, engage_pose, Channel.TRANSLATION)
                dr_e = pose_dist(s.pose, engage_pose, Channel.ROTATION)
                if dt_e > exc_t:
                    exc_t = dt_e
                if dr_e > exc_r:
                    exc_r = dr_e
        else:
            if session is not None and session.engaged:
                disengage(session)
                pending_reengage = True

    metrics = TraceMetrics(
        duration_s=duration,
        steps=steps,
        clutch_count=clutches,
        path_len_t=path_t,
        path_len_r=path_r,
        mean_step_t=path_t / steps if steps else 0.0,
        mean_step_r=path_r / steps if steps else 0.0,
        max_excursion_t=exc_t,
        max_excursion_r=exc_r,
    )
    return ReplayResult(tuple(rows), tuple(gain_rows), metrics)


def object_trace(result: ReplayResult, source: Trace) -> Trace:
    """Reshape replay output as a trace (object poses at the engaged ticks)."""
    dt_by_tick = {s.t: s.dt for s in source.samples}
    samples = []
    for row_i, (t, pose) in enumerate(result.object_trace):
        samples.append(TrackerSample(row_i, pose, dt_by_tick.get(t, 1.0 / 60.0), True))
    desc = "object trace"
    if source.description:
        desc = f"object trace of: {source.description}"
    return Trace(tuple(samples), source.version, desc)
