"""Exception types raised by ricci_lab.

Every precondition failure has its own class so callers (the CLI in
particular) can tell a violated hypothesis apart from a failed check.
"""


class RicciLabError(Exception):
    """Base class for all ricci_lab errors."""


class DomainError(RicciLabError, ValueError):
    """Radial coordinate outside the domain of a field or metric."""


class SingularWarp(RicciLabError):
    """Warping function at or below the coordinate-singularity guard."""


class NonpositiveLapse(RicciLabError):
    """Lapse of the conformal-radial ansatz is not strictly positive."""


class SingularMetric(RicciLabError):
    """Coordinate metric is not invertible at a stencil node."""


class StencilOutOfRange(RicciLabError):
    """A finite-difference stencil needs a node the patch does not hold."""


class WrongHMode(RicciLabError):
    """Operation requires a different h mode than the structure carries."""


class CriticalPoint(RicciLabError):
    """The potential has vanishing gradient where a direction is needed."""


class ZeroPotential(RicciLabError):
    """The potential vanishes where the formula divides by it."""


class NonzeroScalar(RicciLabError):
    """Operation assumes zero scalar curvature but s is not zero."""


class DimensionError(RicciLabError, ValueError):
    """Dimension outside the supported range for the operation."""


class BadInitialData(RicciLabError, ValueError):
    """Initial ODE state violates a constraint or admissibility guard."""


class StepFailure(RicciLabError):
    """An integration step produced non-finite values."""


class ConfigError(RicciLabError, ValueError):
    """Malformed or inconsistent lab configuration."""
