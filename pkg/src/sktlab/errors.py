"""Exception hierarchy shared by all sktlab modules."""


class SktError(Exception):
    """Base class for every error raised by sktlab."""


class ParameterError(SktError, ValueError):
    """Coefficients are non-finite or otherwise unusable."""


class ShapeError(SktError, ValueError):
    """Parameters do not have the structure an operation requires."""


class DomainError(SktError, ValueError):
    """A closed form was evaluated where it is undefined.

    ``expression`` names the offending subexpression (a denominator, a
    square-root argument) so callers can report it.
    """

    def __init__(self, message, expression=None, location=None):
        super().__init__(message)
        self.expression = expression
        self.location = location


class TransformError(SktError, ValueError):
    """A named transformation's preconditions are not met."""


class EmptySampleError(SktError, RuntimeError):
    """Every sample point of a residual check was rejected."""


class ConfigError(SktError, ValueError):
    """A CLI configuration failed schema validation."""
