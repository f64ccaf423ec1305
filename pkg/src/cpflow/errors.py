"""Exception types shared across the package.

Every guard that refuses to continue carries enough context to replay the
failing evaluation: the offending matrix or state is attached to the
exception instead of being silently repaired.
"""


class CpflowError(Exception):
    """Base class for all package errors."""


class SingularMatrix(CpflowError):
    """Matrix inversion or polar decomposition hit a (near-)singular input."""

    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class NotPositiveDefinite(CpflowError):
    """A matrix required to be positive definite is not.

    Raised both by the functional calculus (sqrt/log of a PSD argument) and
    by the integrator when a plastic state leaves the admissible cone.  The
    offending matrix rides along for post-mortem inspection.
    """

    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class InconsistentDeformation(CpflowError):
    """F was supplied alongside C but F^T F does not reproduce C."""


class ZeroDeviator(CpflowError):
    """A flow direction was requested at a state whose deviatoric stress
    vanishes while the yield value is positive; the normalized direction is
    undefined there."""


class NoConvergence(CpflowError):
    """An iterative solve (consistency return) hit its iteration cap."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class ParseError(CpflowError):
    """Scenario configuration text could not be parsed."""


class ValidationError(CpflowError):
    """Scenario configuration parsed but violates a documented invariant."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
