"""Serial robot arms: tool pose map, geometric Jacobian, joint limits.

Joints are described by a kind (revolute/prismatic), a unit axis in the
parent frame and a fixed origin transform from the parent joint frame
(equivalent in expressive power to DH parameters but directly auditable in
scenario files). Link collision geometry is a list of capsules per link,
expressed in the frame after that link's joint motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K

REVOLUTE = "revolute"
PRISMATIC = "prismatic"

_AXIS_TOL = 1e-9


def _rpy_matrix(r, p, y):
    """Rz(y) @ Ry(p) @ Rx(r)."""
    cr, sr = math.cos(r), math.sin(r)
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(y), math.sin(y)
    return np.array([
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ])


@dataclass(frozen=True)
class Transform:
    """Rigid transform (rotation matrix + translation, meters)."""

    rotation: np.ndarray
    translation: np.ndarray

    @staticmethod
    def identity() -> "Transform":
        return Transform(np.eye(3), np.zeros(3))

    @staticmethod
    def from_xyz_rpy(xyz=(0.0, 0.0, 0.0), rpy=(0.0, 0.0, 0.0)) -> "Transform":
        return Transform(_rpy_matrix(*rpy), np.asarray(xyz, dtype=float))


@dataclass(frozen=True)
class Joint:
    kind: str
    axis: np.ndarray
    origin: Transform
    limits: tuple[float, float]


@dataclass(frozen=True)
class Capsule:
    """Collision capsule: two endpoints and a radius, in the link frame."""

    p0: np.ndarray
    p1: np.ndarray
    radius: float


@dataclass(frozen=True)
class ToolPose:
    position: np.ndarray
    rotation: np.ndarray


@dataclass
class RobotModel:
    """Immutable serial chain; all operations on it are pure."""

    name: str
    joints: list[Joint]
    tool_offset: Transform = field(default_factory=Transform.identity)
    link_capsules: dict[int, list[Capsule]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"need at least 4 joints, got {self.n}")
        for i, j in enumerate(self.joints):
            if j.kind not in (REVOLUTE, PRISMATIC):
                raise ValueError(f"joint {i}: unknown kind {j.kind!r}")
            if abs(np.linalg.norm(j.axis) - 1.0) > _AXIS_TOL:
                raise ValueError(f"joint {i}: axis is not unit length")
            lo, hi = j.limits
            if not lo < hi:
                raise ValueError(f"joint {i}: limits must satisfy lo < hi")
        self._pack = _pack_robot(self)

    @property
    def n(self) -> int:
        return len(self.joints)

    @property
    def lower(self) -> np.ndarray:
        return self._pack.lo

    @property
    def upper(self) -> np.ndarray:
        return self._pack.hi

    @property
    def pack(self) -> K.RobotPack:
        return self._pack

    def check_q(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.n,):
            raise ValueError(f"expected joint vector of length {self.n}, got {q.shape}")
        return q


def _pack_robot(robot: RobotModel) -> K.RobotPack:
    n = robot.n
    kinds = np.array(
        [0 if j.kind == REVOLUTE else 1 for j in robot.joints], dtype=np.int64
    )
    axes = np.ascontiguousarray([j.axis for j in robot.joints], dtype=float)
    org_r = np.ascontiguousarray([j.origin.rotation for j in robot.joints], dtype=float)
    org_t = np.ascontiguousarray([j.origin.translation for j in robot.joints], dtype=float)
    lo = np.array([j.limits[0] for j in robot.joints], dtype=float)
    hi = np.array([j.limits[1] for j in robot.joints], dtype=float)

    caps = []
    for link, items in sorted(robot.link_capsules.items()):
        if not 0 <= link < n:
            raise ValueError(f"capsule link index {link} out of range")
        for c in items:
            if c.radius <= 0:
                raise ValueError("capsule radius must be positive")
            caps.append((link, c))
    m = len(caps)
    cap_link = np.array([c[0] for c in caps], dtype=np.int64) if m else np.zeros(0, np.int64)
    cap_p0 = (
        np.ascontiguousarray([c[1].p0 for c in caps], dtype=float)
        if m else np.zeros((0, 3))
    )
    cap_p1 = (
        np.ascontiguousarray([c[1].p1 for c in caps], dtype=float)
        if m else np.zeros((0, 3))
    )
    cap_r = np.array([c[1].radius for c in caps], dtype=float) if m else np.zeros(0)

    return K.RobotPack(
        kinds, axes, org_r, org_t,
        np.ascontiguousarray(robot.tool_offset.rotation, dtype=float),
        np.ascontiguousarray(robot.tool_offset.translation, dtype=float),
        lo, hi, cap_link, cap_p0, cap_p1, cap_r,
    )


# ---------------------------------------------------------------------------
# operations

def fk_pose(robot: RobotModel, q) -> ToolPose:
    """Tool pose: joint transforms composed in order, then the tool offset."""
    q = robot.check_q(q)
    rot, pos = K.fk_pose(robot.pack, q)
    return ToolPose(pos, rot)


def tool_axis(robot: RobotModel, q) -> np.ndarray:
    """World direction of the tool z-axis."""
    return fk_pose(robot, q).rotation[:, 2].copy()


def geometric_jacobian(robot: RobotModel, q) -> np.ndarray:
    """6 x n Jacobian at the tool point, world frame.

    Rows 0-2 are the linear velocity contribution per joint, rows 3-5 the
    spatial angular velocity (revolute: omega x lever / omega; prismatic:
    axis / zero).
    """
    q = robot.check_q(q)
    return K.geometric_jacobian(robot.pack, q)


def within_limits(robot: RobotModel, q) -> bool:
    """Closed-interval joint limit check (boundary states are valid)."""
    q = robot.check_q(q)
    return bool(K.within_limits_k(robot.pack, q))


def link_frames(robot: RobotModel, q):
    """World frame (rotation, translation) after each joint's motion."""
    q = robot.check_q(q)
    _, _, link_r, link_p, _, _ = K.fk_full(robot.pack, q)
    return link_r, link_p


# ---------------------------------------------------------------------------
# built-in robots
#
# gantry6 is the analytic test robot: three orthogonal prismatic axes and a
# Rz*Ry*Rx wrist about the same point, zero tool offset. Its tool pose is
# closed-form invertible, which several oracles rely on.

_TOOL_CAPSULE = [Capsule(np.array([0.0, 0.0, 0.0]), np.array([0.0, 0.0, 0.12]), 0.02)]


def make_gantry6(
    xy_limit=1.0,
    z_limit=1.0,
    yaw_limit=0.8,
    tilt_limit=1.4,
) -> RobotModel:
    ident = Transform.identity()
    ex = np.array([1.0, 0.0, 0.0])
    ey = np.array([0.0, 1.0, 0.0])
    ez = np.array([0.0, 0.0, 1.0])
    joints = [
        Joint(PRISMATIC, ex, ident, (-xy_limit, xy_limit)),
        Joint(PRISMATIC, ey, ident, (-xy_limit, xy_limit)),
        Joint(PRISMATIC, ez, ident, (-z_limit, z_limit)),
        Joint(REVOLUTE, ez, ident, (-yaw_limit, yaw_limit)),
        Joint(REVOLUTE, ey, ident, (-tilt_limit, tilt_limit)),
        Joint(REVOLUTE, ex, ident, (-tilt_limit, tilt_limit)),
    ]
    return RobotModel("gantry6", joints, ident, {5: list(_TOOL_CAPSULE)})


def make_articulated6() -> RobotModel:
    ez = np.array([0.0, 0.0, 1.0])
    ey = np.array([0.0, 1.0, 0.0])

    def tz(z):
        return Transform.from_xyz_rpy((0.0, 0.0, z))

    joints = [
        Joint(REVOLUTE, ez, tz(0.15), (-2.9, 2.9)),
        Joint(REVOLUTE, ey, tz(0.15), (-1.9, 1.9)),
        Joint(REVOLUTE, ey, tz(0.45), (-2.6, 2.6)),
        Joint(REVOLUTE, ez, tz(0.40), (-2.9, 2.9)),
        Joint(REVOLUTE, ey, tz(0.0), (-2.2, 2.2)),
        Joint(REVOLUTE, ez, tz(0.10), (-2.9, 2.9)),
    ]
    capsules = {
        2: [Capsule(np.array([0.0, 0.0, 0.05]), np.array([0.0, 0.0, 0.35]), 0.045)],
        5: [Capsule(np.array([0.0, 0.0, 0.06]), np.array([0.0, 0.0, 0.18]), 0.02)],
    }
    return RobotModel(
        "articulated6", joints, Transform.from_xyz_rpy((0.0, 0.0, 0.06)), capsules
    )


def make_articulated7() -> RobotModel:
    ez = np.array([0.0, 0.0, 1.0])
    ey = np.array([0.0, 1.0, 0.0])

    def tz(z):
        return Transform.from_xyz_rpy((0.0, 0.0, z))

    joints = [
        Joint(REVOLUTE, ez, tz(0.15), (-2.9, 2.9)),
        Joint(REVOLUTE, ey, tz(0.10), (-2.0, 2.0)),
        Joint(REVOLUTE, ez, tz(0.35), (-2.9, 2.9)),
        Joint(REVOLUTE, ey, tz(0.05), (-2.0, 2.0)),
        Joint(REVOLUTE, ez, tz(0.35), (-2.9, 2.9)),
        Joint(REVOLUTE, ey, tz(0.05), (-2.0, 2.0)),
        Joint(REVOLUTE, ez, tz(0.08), (-2.9, 2.9)),
    ]
    capsules = {
        2: [Capsule(np.array([0.0, 0.0, 0.05]), np.array([0.0, 0.0, 0.30]), 0.045)],
        6: [Capsule(np.array([0.0, 0.0, 0.05]), np.array([0.0, 0.0, 0.17]), 0.02)],
    }
    return RobotModel(
        "articulated7", joints, Transform.from_xyz_rpy((0.0, 0.0, 0.05)), capsules
    )


BUILTIN_ROBOTS = {
    "gantry6": make_gantry6,
    "articulated6": make_articulated6,
    "articulated7": make_articulated7,
}


def builtin_robot(name: str) -> RobotModel:
    try:
        return BUILTIN_ROBOTS[name]()
    except KeyError:
        raise ValueError(f"unknown built-in robot {name!r}") from None
