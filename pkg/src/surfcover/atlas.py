"""Tangent-space charts over the constraint manifold.

A chart is an orthonormal null-space basis of the constraint Jacobian at
an on-manifold anchor; the atlas is the growing set of charts a run has
covered. Sampling draws in chart coordinates and projects back; traversal
between states hops along short tangent steps, re-anchoring charts as the
walk drifts. Traversal charts are local (not registered in the atlas) so
that re-walking an edge is reproducible regardless of atlas growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .collision import EMPTY_WORLD, CollisionWorld
from .errors import InterpolationError, SampleError, SingularityError
from .manifold import RANK_RTOL, ConstraintSystem, ExtendedConfig, ambient_distance


@dataclass
class ChartParams:
    """Chart geometry defaults; all scenario-overridable."""

    rho: float = 0.1               # chart validity radius
    eps_chart: float = 0.05        # max deviation from the tangent plane
    alpha_chart: float = math.pi / 8  # max tangent angle between neighbor charts
    delta_geo: float = 0.01        # traversal step length


@dataclass
class Chart:
    anchor: ExtendedConfig
    basis: np.ndarray  # (n+2, n-3), orthonormal columns
    rho: float
    id: int


def _basis_at(sys: ConstraintSystem, vec: np.ndarray) -> np.ndarray:
    status, basis = K.chart_basis(sys.robot.pack, sys.surface.pack, vec, RANK_RTOL)
    if status != K.OK:
        raise SingularityError(
            "constraint Jacobian rank deficient; no tangent chart exists here"
        )
    return basis


class Atlas:
    """Append-only chart collection owned by a single exploration run."""

    def __init__(self, sys: ConstraintSystem, params: ChartParams | None = None):
        self.sys = sys
        self.params = params or ChartParams()
        self.charts: list[Chart] = []

    def __len__(self) -> int:
        return len(self.charts)

    def chart_create(self, anchor: ExtendedConfig) -> Chart:
        """New chart anchored at an on-manifold state."""
        basis = _basis_at(self.sys, anchor.vec)
        chart = Chart(anchor, basis, self.params.rho, len(self.charts))
        self.charts.append(chart)
        anchor.chart_id = chart.id
        return chart

    def to_ambient(self, chart: Chart, y: np.ndarray) -> ExtendedConfig:
        """Chart exponential: linear tangent step, then projection."""
        y = np.asarray(y, dtype=float)
        vec = chart.anchor.vec + chart.basis @ y
        out = self.sys.project(vec)
        out.chart_id = chart.id
        return out

    def to_chart(self, chart: Chart, x: ExtendedConfig) -> np.ndarray:
        """Chart logarithm: flatten x onto the tangent plane."""
        return chart.basis.T @ (x.vec - chart.anchor.vec)

    def deviation(self, chart: Chart, x: ExtendedConfig) -> float:
        """Distance of x from the chart's tangent plane."""
        diff = x.vec - chart.anchor.vec
        y = chart.basis.T @ diff
        return float(np.linalg.norm(diff - chart.basis @ y))

    def ensure_chart(self, x: ExtendedConfig) -> Chart:
        """Chart that owns x, creating one when x strayed too far.

        Reuses the chart x was projected through unless x deviates from its
        tangent plane by more than eps_chart or lies outside the chart ball.
        """
        if 0 <= x.chart_id < len(self.charts):
            chart = self.charts[x.chart_id]
            y = self.to_chart(chart, x)
            if (self.deviation(chart, x) <= self.params.eps_chart
                    and np.linalg.norm(y) <= self.params.rho):
                return chart
        return self.chart_create(x)

    # -- sampling ---------------------------------------------------------

    def sample_uniform(self, rng: np.random.Generator,
                       max_tries: int = 10) -> ExtendedConfig:
        """Uniform over charts, then uniform in the tangent ball."""
        if not self.charts:
            raise ValueError("cannot sample from an empty atlas")
        dim = self.sys.manifold_dim
        for _ in range(max_tries):
            chart = self.charts[int(rng.integers(len(self.charts)))]
            direction = rng.standard_normal(dim)
            norm = np.linalg.norm(direction)
            if norm < 1e-12:
                continue
            radius = chart.rho * rng.random() ** (1.0 / dim)
            y = direction * (radius / norm)
            try:
                return self.to_ambient(chart, y)
            except Exception:
                continue
        raise SampleError(f"projection failed {max_tries} times in a row")

    def sample_gaussian_near(self, x: ExtendedConfig, sigma: float,
                             rng: np.random.Generator) -> ExtendedConfig:
        """Gaussian in tangent coordinates centered on x."""
        chart = self.ensure_chart(x)
        y = self.to_chart(chart, x)
        if sigma > 0.0:
            y = y + sigma * rng.standard_normal(self.sys.manifold_dim)
        try:
            return self.to_ambient(chart, y)
        except Exception as exc:
            raise SampleError(str(exc)) from exc


# ---------------------------------------------------------------------------
# traversal

_WALK_MARGIN = 4  # buffer slack factor over the straight-line step count


def _walk(sys: ConstraintSystem, world: CollisionWorld,
          a: ExtendedConfig, b: ExtendedConfig, step: float,
          params: ChartParams, validate: bool):
    dist = ambient_distance(a, b)
    max_states = int(dist / step * _WALK_MARGIN) + 64
    status, states, count = K.walk_geodesic(
        sys.robot.pack, sys.surface.pack, world.pack,
        a.vec, b.vec, step, params.eps_chart, params.rho, RANK_RTOL,
        sys.eps_proj, sys.max_newton_iters, validate, max_states,
    )
    return status, states[:count]


def geodesic_interpolate(sys: ConstraintSystem, a: ExtendedConfig,
                         b: ExtendedConfig, t: float,
                         params: ChartParams | None = None) -> ExtendedConfig:
    """State at fraction t of the discrete geodesic from a toward b.

    The traversal walks the full geodesic and returns the recorded state at
    cumulative path length <= t * total, so the clamp arithmetic for tree
    extensions holds exactly on flat manifolds.
    """
    params = params or ChartParams()
    if not 0.0 <= t <= 1.0:
        raise ValueError("interpolation fraction must be in [0, 1]")
    if t == 0.0:
        return a
    status, states = _walk(sys, EMPTY_WORLD, a, b,
                           params.delta_geo, params, validate=False)
    if status != K.OK:
        raise InterpolationError(f"traversal failed with status {status}")
    if t == 1.0:
        return sys.make_config(states[-1])
    lengths = np.linalg.norm(np.diff(states, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    target = t * cum[-1]
    idx = int(np.searchsorted(cum, target + 1e-12, side="right") - 1)
    return sys.make_config(states[idx])


def check_transition(sys: ConstraintSystem, world: CollisionWorld,
                     a: ExtendedConfig, b: ExtendedConfig,
                     dq_check: float, params: ChartParams | None = None) -> bool:
    """Walk the geodesic from a to b in steps of at most dq_check.

    Every intermediate state (including b) must project, stay within joint
    limits and the surface domain, and be collision-free. Failures of any
    kind return False.
    """
    params = params or ChartParams()
    status, _ = _walk(sys, world, a, b, dq_check, params, validate=True)
    return status == K.OK


def rewalk_states(sys: ConstraintSystem, world: CollisionWorld,
                  a: ExtendedConfig, b: ExtendedConfig, dq_check: float,
                  params: ChartParams | None = None):
    """Re-run a transition walk and return (ok, visited states).

    Used by the test suites to re-validate recorded tree edges and check
    step continuity; the walk is deterministic, so a passing edge
    reproduces the same state sequence.
    """
    params = params or ChartParams()
    status, states = _walk(sys, world, a, b, dq_check, params, validate=True)
    return status == K.OK, states


from .collision import EMPTY_WORLD as EMPTY_WORLD_SENTINEL  # noqa: E402
