"""Extended configuration space (q, u, v) and its constraint manifold.

The constraint stacks the tool-position residual against the surface with
the first two components of the surface unit normal expressed in the tool
frame; its zero set is a smooth manifold of dimension n - 3 that the
explorers walk on. Projection is damped Newton with minimum-norm
(pseudo-inverse) steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import (
    ConsistencyError,
    DegenerateSurfaceError,
    ProjectionError,
    SingularityError,
)
from .kinematics import RobotModel, ToolPose
from .surfaces import Surface

#: Relative singular-value cutoff for rank decisions on the 5-row Jacobian.
RANK_RTOL = 1e-6


@dataclass
class ExtendedConfig:
    """A point of the ambient space with cached pose and residual.

    `vec` is the concatenated (q, u, v) vector; `chart_id` records the
    atlas chart this state was projected through (-1 when unassigned).
    """

    vec: np.ndarray
    pose: ToolPose
    residual: float
    on_manifold: bool
    chart_id: int = -1
    _n: int = field(default=0, repr=False)

    @property
    def q(self) -> np.ndarray:
        return self.vec[: self._n]

    @property
    def u(self) -> float:
        return float(self.vec[self._n])

    @property
    def v(self) -> float:
        return float(self.vec[self._n + 1])


class ConstraintSystem:
    """Robot + surface + projection parameters; immutable and shareable."""

    def __init__(self, robot: RobotModel, surface: Surface,
                 eps_proj: float = 1e-6, max_newton_iters: int = 50):
        self.robot = robot
        self.surface = surface
        self.eps_proj = float(eps_proj)
        self.max_newton_iters = int(max_newton_iters)

    @property
    def n(self) -> int:
        return self.robot.n

    @property
    def ambient_dim(self) -> int:
        return self.robot.n + 2

    @property
    def manifold_dim(self) -> int:
        return self.robot.n - 3

    # -- state construction ---------------------------------------------

    def check_vec(self, vec) -> np.ndarray:
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.ambient_dim,):
            raise ValueError(
                f"expected ambient vector of length {self.ambient_dim}, "
                f"got shape {vec.shape}"
            )
        return vec

    def make_config(self, vec, chart_id: int = -1) -> ExtendedConfig:
        """Build an ExtendedConfig with cached pose and residual."""
        vec = self.check_vec(vec).copy()
        rot, pos = K.fk_pose(self.robot.pack, vec[: self.n])
        status, c = K.constraint_c(self.robot.pack, self.surface.pack, vec)
        if status != K.OK:
            raise DegenerateSurfaceError(
                f"degenerate surface normal at (u={vec[self.n]}, v={vec[self.n + 1]})"
            )
        res = float(np.max(np.abs(c)))
        return ExtendedConfig(
            vec, ToolPose(pos, rot), res, res <= self.eps_proj, chart_id, self.n
        )

    def config_from_parts(self, q, u, v) -> ExtendedConfig:
        q = self.robot.check_q(q)
        return self.make_config(np.concatenate([q, [float(u), float(v)]]))

    # -- operations -------------------------------------------------------

    def constraint(self, x: ExtendedConfig | np.ndarray) -> np.ndarray:
        """5-vector: position residual rows, then the two normal rows."""
        vec = x.vec if isinstance(x, ExtendedConfig) else self.check_vec(x)
        status, c = K.constraint_c(self.robot.pack, self.surface.pack, vec)
        if status != K.OK:
            raise DegenerateSurfaceError("degenerate surface normal")
        return c

    def constraint_jacobian(self, x: ExtendedConfig | np.ndarray) -> np.ndarray:
        vec = x.vec if isinstance(x, ExtendedConfig) else self.check_vec(x)
        status, jac = K.constraint_jac(self.robot.pack, self.surface.pack, vec)
        if status != K.OK:
            raise DegenerateSurfaceError("degenerate surface normal")
        return jac

    def project(self, x: ExtendedConfig | np.ndarray) -> ExtendedConfig:
        """Newton-project onto the manifold; already-converged input is
        returned unchanged."""
        if isinstance(x, ExtendedConfig):
            if x.on_manifold:
                return x
            vec = x.vec
        else:
            vec = self.check_vec(x)
        status, out = K.newton_project(
            self.robot.pack, self.surface.pack, vec,
            self.eps_proj, self.max_newton_iters,
        )
        if status == K.OK:
            return self.make_config(out)
        if status == K.SINGULAR:
            raise SingularityError("constraint Jacobian degenerate during projection")
        if status == K.DEGENERATE:
            raise DegenerateSurfaceError("degenerate surface normal during projection")
        raise ProjectionError(
            f"no convergence within {self.max_newton_iters} Newton iterations"
        )

    def alignment_sign(self, x: ExtendedConfig) -> int:
        """+1 tool axis along the normal, -1 against it (on-manifold states)."""
        status, d = K.tool_align_dot(self.robot.pack, self.surface.pack, x.vec)
        if status != K.OK:
            raise DegenerateSurfaceError("degenerate surface normal")
        if abs(d) < 0.5:
            raise ConsistencyError(
                f"tool/normal dot {d:.3f} on a supposedly on-manifold state"
            )
        return 1 if d > 0 else -1


def ambient_distance(a: ExtendedConfig | np.ndarray,
                     b: ExtendedConfig | np.ndarray) -> float:
    """Euclidean norm over (q, u, v) with unit weights."""
    av = a.vec if isinstance(a, ExtendedConfig) else np.asarray(a, dtype=float)
    bv = b.vec if isinstance(b, ExtendedConfig) else np.asarray(b, dtype=float)
    return float(np.linalg.norm(av - bv))
