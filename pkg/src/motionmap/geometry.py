"""Double precision vector / quaternion kernel.

Unit quaternions are scalar-first (w, x, y, z) and multiplied with the
Hamilton product.  Every operation that produces a quaternion renormalizes
the result and resolves the double-cover sign so that w >= 0 (ties broken
toward a positive first nonzero vector component).  Keeping exactly one
representative per rotation makes comparisons and serialized output stable.

No third party dependencies on purpose; this module is the hot path for
everything else in the package.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple


class Channel(Enum):
    """The two independent motion channels."""

    TRANSLATION = "translation"
    ROTATION = "rotation"


class Vec3(NamedTuple):
    x: float
    y: float
    z: float

    def add(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def sub(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scale(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


class UnitQuat(NamedTuple):
    """A rotation.  Build through unit() / from_axis_angle(), not directly."""

    w: float
    x: float
    y: float
    z: float


ZERO_VEC = Vec3(0.0, 0.0, 0.0)
IDENTITY = UnitQuat(1.0, 0.0, 0.0, 0.0)

# Arcs shorter than this are treated as degenerate by slerp/quat_pow.
_DEGENERATE_ARC = 1e-10


def _canonical(w: float, x: float, y: float, z: float) -> UnitQuat:
    # Pick the representative with w >= 0.  For w == 0 the first nonzero
    # vector component decides, so q and -q never both come out of here.
    if w < 0.0:
        return UnitQuat(-w, -x, -y, -z)
    if w == 0.0:
        if x < 0.0 or (x == 0.0 and (y < 0.0 or (y == 0.0 and z < 0.0))):
            return UnitQuat(-w, -x, -y, -z)
    return UnitQuat(w, x, y, z)


def _normalized(w: float, x: float, y: float, z: float) -> UnitQuat:
    n2 = w * w + x * x + y * y + z * z
    if n2 != 1.0:
        inv = 1.0 / math.sqrt(n2)
        w *= inv
        x *= inv
        y *= inv
        z *= inv
    return _canonical(w, x, y, z)


def unit(w: float, x: float, y: float, z: float) -> UnitQuat:
    """Normalize arbitrary components into a canonical unit quaternion.

    Raises ValueError for non-finite input or a norm too small to carry
    direction information.
    """
    n2 = w * w + x * x + y * y + z * z
    if not math.isfinite(n2):
        raise ValueError("non-finite quaternion components")
    if n2 < 1e-16:
        raise ValueError("quaternion norm too close to zero")
    return _normalized(w, x, y, z)


def from_axis_angle(axis: Vec3, angle: float) -> UnitQuat:
    """Rotation of `angle` radians about `axis` (need not be unit length)."""
    n = axis.norm()
    if not math.isfinite(n) or n < 1e-12:
        raise ValueError("rotation axis has near-zero length")
    half = 0.5 * angle
    s = math.sin(half) / n
    return _normalized(math.cos(half), axis.x * s, axis.y * s, axis.z * s)


def compose(a: UnitQuat, b: UnitQuat) -> UnitQuat:
    """Hamilton product a*b: rotate by b, then by a."""
    aw, ax, ay, az = a
    if aw == 1.0 and ax == 0.0 and ay == 0.0 and az == 0.0:
        return b
    bw, bx, by, bz = b
    if bw == 1.0 and bx == 0.0 and by == 0.0 and bz == 0.0:
        return a
    return _normalized(
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def inverse(q: UnitQuat) -> UnitQuat:
    w, x, y, z = q
    return _canonical(w, -x, -y, -z)


def rotate_vec(q: UnitQuat, v: Vec3) -> Vec3:
    """Apply the rotation q to v (the sandwich q v q^-1, expanded)."""
    w, x, y, z = q
    vx, vy, vz = v
    # t = 2 * (q.vec x v); v' = v + w*t + q.vec x t
    tx = 2.0 * (y * vz - z * vy)
    ty = 2.0 * (z * vx - x * vz)
    tz = 2.0 * (x * vy - y * vx)
    return Vec3(
        vx + w * tx + y * tz - z * ty,
        vy + w * ty + z * tx - x * tz,
        vz + w * tz + x * ty - y * tx,
    )


def conjugate_rot(q: UnitQuat, r: UnitQuat) -> UnitQuat:
    """Express rotation r in the frame reached by q: q * r * q^-1."""
    return compose(compose(q, r), inverse(q))


def rotation_angle(q: UnitQuat) -> float:
    """Rotation angle in [0, pi] (canonical representative assumed)."""
    w, x, y, z = q
    return 2.0 * math.atan2(math.sqrt(x * x + y * y + z * z), w)


def rotation_axis(q: UnitQuat) -> Vec3 | None:
    """Unit rotation axis, or None when the angle is too small to define one."""
    _, x, y, z = q
    s = math.sqrt(x * x + y * y + z * z)
    if s < 1e-15:
        return None
    return Vec3(x / s, y / s, z / s)


def quat_pow(q: UnitQuat, k: float) -> UnitQuat:
    """Fractional rotation q^k: same axis, k times the angle.

    Equivalent to slerp from identity to q.  Arcs below the degenerate
    threshold collapse to the identity.
    """
    w, x, y, z = q
    s = math.sqrt(x * x + y * y + z * z)
    half = math.atan2(s, w)
    if half < 0.5 * _DEGENERATE_ARC:
        return IDENTITY
    nh = k * half
    f = math.sin(nh) / s
    return _normalized(math.cos(nh), x * f, y * f, z * f)


def slerp(a: UnitQuat, b: UnitQuat, k: float) -> UnitQuat:
    """Spherical interpolation from a (k=0) to b (k=1) on the shorter arc.

    k outside [0, 1] extrapolates.  When a and b are closer than the
    degenerate threshold the endpoint a is returned unchanged.
    """
    if k == 0.0:
        return a
    if k == 1.0:
        return b
    rel = compose(inverse(a), b)
    return compose(a, quat_pow(rel, k))


class Pose(NamedTuple):
    p: Vec3
    q: UnitQuat


IDENTITY_POSE = Pose(ZERO_VEC, IDENTITY)


def quat_dist(a: UnitQuat, b: UnitQuat) -> float:
    """Angle of the relative rotation between a and b, in [0, pi].

    Works on the renormalized relative product, which matters: for two
    representations of the same rotation the normalization pushes the
    scalar part back to exactly 1, so equal rotations measure exactly 0
    instead of landing on the acos resolution floor.  Arguments are put in
    a fixed order first, making the distance symmetric down to the bit.
    """
    if tuple(b) < tuple(a):
        a, b = b, a
    rel = compose(a, inverse(b))
    w = rel.w
    # canonical form keeps w >= 0; clamp the fp overshoot above 1
    if w > 1.0:
        w = 1.0
    elif w < -1.0:
        w = -1.0
    return 2.0 * math.acos(w)


def pose_dist(a: Pose, b: Pose, mode: Channel) -> float:
    """Per-channel distance: Euclidean for translation, arc angle for rotation."""
    if mode is Channel.TRANSLATION:
        return a.p.sub(b.p).norm()
    return quat_dist(a.q, b.q)
