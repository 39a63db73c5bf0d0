"""Exception types shared across the package.

Plain contract violations (wrong vector length, unknown enum value, bad
argument combinations) raise ValueError; everything that can fail for a
numerical or geometric reason gets a dedicated type so callers can treat
failures as data where the algorithms require it.
"""


class SurfcoverError(Exception):
    """Base class for all package-specific errors."""


class DegenerateSurfaceError(SurfcoverError):
    """Surface normal vanished (parametrization degenerate at this point)."""


class ProjectionError(SurfcoverError):
    """Newton projection onto the constraint manifold did not converge."""


class SingularityError(SurfcoverError):
    """Constraint Jacobian is rank deficient at the queried state."""


class InterpolationError(SurfcoverError):
    """On-manifold traversal between two states stalled."""


class SampleError(SurfcoverError):
    """Repeated projection failures while drawing a manifold sample."""


class ConsistencyError(SurfcoverError):
    """An internal invariant was violated (indicates a bug or bad state)."""


class InitializationError(SurfcoverError):
    """Exploration root could not be established for a scenario."""


class ScenarioError(SurfcoverError):
    """Scenario file failed to parse or validate."""


class UndefinedMetricError(SurfcoverError):
    """A coverage metric was requested against an empty baseline."""
