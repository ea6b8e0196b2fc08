"""Exception hierarchy.

Everything raised on purpose derives from :class:`NcSheafError`.  The CLI maps
:class:`ParseError` to exit status 2 and every other subclass to exit status 1.
"""


class NcSheafError(Exception):
    """Base class for domain errors."""


class ParseError(NcSheafError, ValueError):
    """Malformed serialized input."""


class FieldMismatchError(NcSheafError):
    """Operands live over different scalar fields (real vs complex)."""


class UnsupportedOperationError(NcSheafError):
    pass


class InvalidOmegaError(NcSheafError):
    """A level sequence violates ``V_{q+1} <= V_q & (V_q + 1)``."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class NotASubsetError(NcSheafError):
    pass


class IncompatibleSectionsError(NcSheafError):
    """Two sections of a cover disagree on an overlap."""

    def __init__(self, message, pair=None, level=None, component=None):
        super().__init__(message)
        self.pair = pair
        self.level = level
        self.component = component


class OutOfDomainError(NcSheafError):
    pass


class PreconditionError(NcSheafError):
    pass


class DegreeError(NcSheafError):
    pass


class RangeError(NcSheafError, ValueError):
    pass


class ShapeError(NcSheafError):
    """Order or domain mismatch between triangular matrices."""
