"""Exception hierarchy shared by all modules."""


class EdmondsError(Exception):
    """Base class for errors raised by this package."""


class FieldTooSmallError(EdmondsError):
    """The field (or the configured sample set) has too few elements."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class UnsupportedCharacteristicError(EdmondsError):
    """The field characteristic divides a degree that must be coprime to it."""


class UnsupportedOperationError(EdmondsError, TypeError):
    """The ring does not provide the requested operation (e.g. division in R)."""


class DimensionMismatchError(EdmondsError, ValueError):
    pass


class InvalidInputError(EdmondsError, ValueError):
    pass


class InvalidWitnessError(EdmondsError, ValueError):
    pass


class InstanceTooLargeError(EdmondsError):
    pass


class DegreeCapExceeded(EdmondsError):
    """The blow-up dimension would exceed the configured cap.

    ``partial`` carries the best lower bound reached so far.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InternalConsistencyError(EdmondsError, AssertionError):
    """A state that the mathematics rules out was reached; signals a bug."""
