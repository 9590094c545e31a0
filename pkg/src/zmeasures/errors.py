"""Exception hierarchy shared by all modules."""


class ZMeasureError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ZMeasureError, ValueError):
    """Input outside the domain where a formula is defined."""


class PoleError(ZMeasureError, ZeroDivisionError):
    """A formula hits a pole (division by an exact zero)."""


class ResourceError(ZMeasureError):
    """A configured size bound would be exceeded."""


class CapabilityError(ZMeasureError):
    """No implemented evaluation path applies to the given input.

    ``conditions`` lists the unmet preconditions, one string per path.
    """

    def __init__(self, message, conditions=()):
        super().__init__(message)
        self.conditions = tuple(conditions)


class NumericError(ZMeasureError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
