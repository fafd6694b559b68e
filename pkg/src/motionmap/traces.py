"""Plain text motion traces.

One record per line, ten whitespace-separated fields:

    t  px py pz  qw qx qy qz  dt  engaged

Ticks start at 0 and increase by exactly 1.  Positions are meters,
quaternions scalar-first, dt is seconds since the previous record, engaged
is 0 or 1.  Lines starting with '#' are comments; '#%' marks header
directives (format version, units, free-text description).  Floats are
written with 17 significant digits so serialize -> parse -> serialize is
byte stable.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass

from .errors import ConfigError, TraceError
from .engine import TrackerSample
from .geometry import Pose, UnitQuat, Vec3, ZERO_VEC, compose, from_axis_angle, unit

FORMAT_VERSION = 1
_UNITS = "m rad"

# Quaternion acceptance thresholds for incoming data.  Within the strict
# band the stored bits are kept untouched (canonical sign flip at most) so
# round-trips are exact; within the loose band we renormalize and warn;
# beyond it the data is rejected.
_NORM_STRICT = 1e-9
_NORM_LOOSE = 1e-6


class TraceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Trace:
    samples: tuple[TrackerSample, ...] = ()
    version: int = FORMAT_VERSION
    description: str = ""


def incoming_quat(w: float, x: float, y: float, z: float, *, where: str = "input") -> UnitQuat:
    """Admit an externally supplied quaternion.

    Bit-preserving when the norm is already within 1e-9 of unit (only the
    canonical sign flip is applied, which is exact).  Norm off by up to 1e-6
    renormalizes with a warning; worse than that raises TraceError.
    """
    for v in (w, x, y, z):
        if not math.isfinite(v):
            raise TraceError(f"{where}: non-finite quaternion component")
    n = math.sqrt(w * w + x * x + y * y + z * z)
    err = abs(n - 1.0)
    if err > _NORM_LOOSE:
        raise TraceError(f"{where}: quaternion norm {n!r} is too far from 1")
    if err > _NORM_STRICT:
        warnings.warn(f"{where}: renormalizing quaternion (norm {n!r})", TraceWarning)
        inv = 1.0 / n
        w *= inv
        x *= inv
        y *= inv
        z *= inv
    if w < 0.0 or (
        w == 0.0 and (x < 0.0 or (x == 0.0 and (y < 0.0 or (y == 0.0 and z < 0.0))))
    ):
        w, x, y, z = -w, -x, -y, -z
    return UnitQuat(w, x, y, z)


def parse_trace(text: str) -> Trace:
    """Parse trace text.  All problems raise TraceError naming the line."""
    version: int | None = None
    description = ""
    samples: list[TrackerSample] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#%"):
            directive = line[2:].strip()
            if directive.startswith("motion-trace"):
                tag = directive[len("motion-trace") :].strip()
                if not tag.startswith("v"):
                    raise TraceError(f"line {lineno}: malformed format directive {line!r}")
                try:
                    version = int(tag[1:])
                except ValueError:
                    raise TraceError(
                        f"line {lineno}: malformed format version {tag!r}"
                    ) from None
                if version != FORMAT_VERSION:
                    raise TraceError(
                        f"line {lineno}: unsupported trace format version {version}"
                    )
            elif directive.startswith("units"):
                units = directive[len("units") :].strip()
                if units != _UNITS:
                    raise TraceError(
                        f"line {lineno}: unsupported units {units!r} (expected {_UNITS!r})"
                    )
            elif directive.startswith("description"):
                description = directive[len("description") :].strip()
            else:
                raise TraceError(f"line {lineno}: unknown directive {line!r}")
            continue
        if line.startswith("#"):
            continue

        fields = line.split()
        if len(fields) != 10:
            raise TraceError(f"line {lineno}: expected 10 fields, got {len(fields)}")
        try:
            t = int(fields[0])
        except ValueError:
            raise TraceError(f"line {lineno}: bad tick {fields[0]!r}") from None
        if t != len(samples):
            raise TraceError(
                f"line {lineno}: tick {t} out of order (expected {len(samples)})"
            )
        try:
            vals = [float(f) for f in fields[1:9]]
        except ValueError as e:
            raise TraceError(f"line {lineno}: {e}") from None
        px, py, pz, qw, qx, qy, qz, dt = vals
        for v in (px, py, pz):
            if not math.isfinite(v):
                raise TraceError(f"line {lineno}: non-finite position component")
        if not (math.isfinite(dt) and dt > 0.0):
            raise TraceError(f"line {lineno}: dt must be > 0, got {fields[8]!r}")
        quat = incoming_quat(qw, qx, qy, qz, where=f"line {lineno}")
        if fields[9] == "1":
            engaged = True
        elif fields[9] == "0":
            engaged = False
        else:
            raise TraceError(f"line {lineno}: engaged flag must be 0 or 1, got {fields[9]!r}")
        samples.append(TrackerSample(t, Pose(Vec3(px, py, pz), quat), dt, engaged))

    return Trace(tuple(samples), version or FORMAT_VERSION, description)


def _fmt(v: float) -> str:
    return format(v, ".17g")


def serialize_trace(trace: Trace) -> str:
    lines = [f"#%motion-trace v{trace.version}", f"#%units {_UNITS}"]
    if trace.description:
        lines.append(f"#%description {trace.description}")
    lines.append("# t px py pz qw qx qy qz dt engaged")
    for s in trace.samples:
        p, q = s.pose
        lines.append(
            f"{s.t} {_fmt(p.x)} {_fmt(p.y)} {_fmt(p.z)} "
            f"{_fmt(q.w)} {_fmt(q.x)} {_fmt(q.y)} {_fmt(q.z)} "
            f"{_fmt(s.dt)} {1 if s.engaged else 0}"
        )
    return "\n".join(lines) + "\n"


def trace_from_poses(
    poses,
    *,
    dt: float = 1.0 / 60.0,
    description: str = "",
    engaged_flags=None,
) -> Trace:
    """Wrap a pose sequence into a trace with sequential ticks."""
    samples = []
    for i, pose in enumerate(poses):
        engaged = True if engaged_flags is None else engaged_flags[i]
        samples.append(TrackerSample(i, pose, dt, engaged))
    return Trace(tuple(samples), FORMAT_VERSION, description)


def random_unit_vec(rng: random.Random) -> Vec3:
    while True:
        v = Vec3(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
        n = v.norm()
        if n > 1e-6:
            return v.scale(1.0 / n)


def random_unit_quat(rng: random.Random) -> UnitQuat:
    """Uniform random rotation (normalized 4d gaussian)."""
    while True:
        w = rng.gauss(0.0, 1.0)
        x = rng.gauss(0.0, 1.0)
        y = rng.gauss(0.0, 1.0)
        z = rng.gauss(0.0, 1.0)
        n = math.sqrt(w * w + x * x + y * y + z * z)
        if n > 1e-6:
            return unit(w, x, y, z)


_GEN_DEFAULTS = {
    "line": {"n": 60, "d": (0.3, 0.0, 0.0), "dt": 1.0 / 60.0},
    "single_axis_rotation": {"n": 60, "axis": (0.0, 0.0, 1.0), "total": math.pi / 2, "dt": 1.0 / 60.0},
    "helix": {"n": 120, "radius": 0.15, "pitch": 0.1, "turns": 1.0, "dt": 1.0 / 60.0},
    "random_walk": {"n": 120, "step_t": 0.05, "step_r": 0.2, "dt": 1.0 / 60.0},
}


def _vec_param(kind: str, name: str, value) -> Vec3:
    if isinstance(value, (list, tuple)) and len(value) == 3:
        try:
            return Vec3(float(value[0]), float(value[1]), float(value[2]))
        except (TypeError, ValueError):
            pass
    raise ConfigError(f"generator {kind}: parameter {name} must be three numbers")


def _num_param(kind: str, name: str, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"generator {kind}: parameter {name} must be a number") from None
    if not math.isfinite(v):
        raise ConfigError(f"generator {kind}: parameter {name} must be finite")
    return v


def gen_trajectory(kind: str, params: dict | None = None, seed: int = 0) -> Trace:
    """Produce a synthetic device trace.

    Kinds: line (straight translation), single_axis_rotation, helix
    (corkscrew translation with a matched twist), random_walk (seeded).
    Unknown kinds or parameters raise ConfigError.
    """
    if kind not in _GEN_DEFAULTS:
        known = ", ".join(sorted(_GEN_DEFAULTS))
        raise ConfigError(f"unknown trajectory kind {kind!r} (expected one of: {known})")
    merged = dict(_GEN_DEFAULTS[kind])
    for key, value in (params or {}).items():
        if key not in merged:
            raise ConfigError(f"generator {kind}: unknown parameter {key!r}")
        merged[key] = value

    n = int(_num_param(kind, "n", merged["n"]))
    if n < 1:
        raise ConfigError(f"generator {kind}: n must be >= 1")
    dt = _num_param(kind, "dt", merged["dt"])
    if dt <= 0.0:
        raise ConfigError(f"generator {kind}: dt must be > 0")

    poses: list[Pose] = []
    if kind == "line":
        d = _vec_param(kind, "d", merged["d"])
        for i in range(n + 1):
            poses.append(Pose(d.scale(i / n), UnitQuat(1.0, 0.0, 0.0, 0.0)))
        desc = "line"
    elif kind == "single_axis_rotation":
        axis = _vec_param(kind, "axis", merged["axis"])
        total = _num_param(kind, "total", merged["total"])
        if axis.norm() < 1e-12:
            raise ConfigError("generator single_axis_rotation: axis must be nonzero")
        for i in range(n + 1):
            poses.append(Pose(ZERO_VEC, from_axis_angle(axis, total * i / n)))
        desc = "single axis rotation"
    elif kind == "helix":
        radius = _num_param(kind, "radius", merged["radius"])
        pitch = _num_param(kind, "pitch", merged["pitch"])
        turns = _num_param(kind, "turns", merged["turns"])
        for i in range(n + 1):
            theta = 2.0 * math.pi * turns * i / n
            p = Vec3(
                radius * math.cos(theta) - radius,
                radius * math.sin(theta),
                pitch * theta / (2.0 * math.pi),
            )
            poses.append(Pose(p, from_axis_angle(Vec3(0.0, 0.0, 1.0), theta)))
        desc = "helix"
    else:  # random_walk
        step_t = _num_param(kind, "step_t", merged["step_t"])
        step_r = _num_param(kind, "step_r", merged["step_r"])
        rng = random.Random(seed)
        p = ZERO_VEC
        q = random_unit_quat(rng)
        poses.append(Pose(p, q))
        for _ in range(n):
            p = p.add(random_unit_vec(rng).scale(rng.uniform(0.0, step_t)))
            q = compose(from_axis_angle(random_unit_vec(rng), rng.uniform(0.0, step_r)), q)
            poses.append(Pose(p, q))
        desc = f"random walk (seed {seed})"

    return trace_from_poses(poses, dt=dt, description=desc)
