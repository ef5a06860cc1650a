"""Exception hierarchy for setreach.

Everything derives from ``ValueError`` so callers that only know the
generic contract ("bad input raises ValueError") keep working.
"""


class SetReachError(ValueError):
    """Base class for all setreach errors."""


class IntervalDomainError(SetReachError):
    """An interval endpoint is non-finite or the endpoints are inverted."""


class DimensionMismatchError(SetReachError):
    """Operands or sets have incompatible dimensions."""


class UnsupportedDimensionError(SetReachError):
    """The requested operation is not supported for this dimension."""


class UnknownActivationError(SetReachError):
    """An activation tag outside {tanh, sigmoid, linear}."""


class ModelSchemaError(SetReachError):
    """A model document does not describe a valid network."""


class ProblemSpecError(SetReachError):
    """A problem specification (CLI flags or YAML file) is invalid."""


class PlotError(SetReachError):
    """Plot input cannot be rendered."""
