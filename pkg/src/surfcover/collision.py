"""Analytic collision primitives and validity checks.

Obstacles are spheres, capsules and axis-aligned boxes; robot links carry
capsules. Separation distances are exact for sphere/capsule pairs and use
a golden-section minimization of the (convex) signed box distance along a
segment for box pairs. Contact at exactly the margin counts as collision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .kinematics import RobotModel, link_frames
from .manifold import ConstraintSystem, ExtendedConfig


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class CapsuleObstacle:
    p0: np.ndarray
    p1: np.ndarray
    radius: float


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by center and half-extents."""

    center: np.ndarray
    half_extents: np.ndarray


Primitive = Sphere | CapsuleObstacle | Box


def _as_kernel_row(p: Primitive):
    if isinstance(p, Sphere):
        if p.radius <= 0:
            raise ValueError("sphere radius must be positive")
        return 0, np.asarray(p.center, float), np.zeros(3), float(p.radius)
    if isinstance(p, CapsuleObstacle):
        if p.radius <= 0:
            raise ValueError("capsule radius must be positive")
        return 1, np.asarray(p.p0, float), np.asarray(p.p1, float), float(p.radius)
    if isinstance(p, Box):
        half = np.asarray(p.half_extents, float)
        if np.any(half <= 0):
            raise ValueError("box half-extents must be strictly positive")
        return 2, np.asarray(p.center, float), half, 0.0
    raise ValueError(f"unsupported primitive {type(p).__name__}")


class CollisionWorld:
    """Immutable obstacle set with a clearance margin."""

    def __init__(self, obstacles: list[Primitive] | None = None, margin: float = 0.0):
        self.obstacles = list(obstacles or [])
        self.margin = float(margin)
        rows = [_as_kernel_row(o) for o in self.obstacles]
        n = len(rows)
        self._pack = K.WorldPack(
            np.array([r[0] for r in rows], dtype=np.int64) if n else np.zeros(0, np.int64),
            np.ascontiguousarray([r[1] for r in rows]) if n else np.zeros((0, 3)),
            np.ascontiguousarray([r[2] for r in rows]) if n else np.zeros((0, 3)),
            np.array([r[3] for r in rows]) if n else np.zeros(0),
            self.margin,
        )

    @property
    def pack(self) -> K.WorldPack:
        return self._pack


EMPTY_WORLD = CollisionWorld()


def primitive_distance(a: Primitive, b: Primitive) -> float:
    """Euclidean separation (negative = penetration) between two primitives.

    Supported pairs: sphere/capsule against sphere/capsule/box. Box-box is
    not needed by the planner (links are capsules) and raises.
    """
    ka, a0, a1, ra = _as_kernel_row(a)
    kb, b0, b1, rb = _as_kernel_row(b)
    if ka == 2 and kb == 2:
        raise ValueError("box-box distance is not supported")
    if ka == 2:  # keep the box on the right
        ka, a0, a1, ra, kb, b0, b1, rb = kb, b0, b1, rb, ka, a0, a1, ra
    if ka == 0:
        a1 = a0  # sphere as a degenerate capsule
    return float(K.capsule_obstacle_dist(a0, a1, ra, kb, b0, b1, rb))


def config_in_collision(world: CollisionWorld, robot: RobotModel, q) -> bool:
    """True iff any world-transformed link capsule is within margin of any
    obstacle. Self-collision is not checked."""
    if not robot.link_capsules or not world.obstacles:
        return False
    link_r, link_p = link_frames(robot, q)
    return bool(K.config_collides(robot.pack, world.pack, link_r, link_p))


def state_valid(sys: ConstraintSystem, world: CollisionWorld,
                x: ExtendedConfig | np.ndarray) -> bool:
    """Joint limits, surface-domain membership and collision freedom."""
    vec = x.vec if isinstance(x, ExtendedConfig) else sys.check_vec(x)
    return bool(K.state_valid_k(sys.robot.pack, sys.surface.pack, world.pack, vec))
