"""Exception hierarchy shared by every layer of the engine."""


class DgvcError(Exception):
    """Base class for all errors raised by dgvc."""


class ResourceLimitError(DgvcError):
    """A configured size or degree cap was exceeded."""


class VariableMismatchError(DgvcError):
    """Operands live in different polynomial rings."""


class UngradedError(DgvcError):
    """A graded operation was requested on an ungraded object."""


class InvalidPresentationError(DgvcError):
    """A dg-presentation failed validation.

    ``diagnostics`` holds one human readable line per violation.
    """

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class NotZeroOneError(DgvcError):
    """The input is not a [0,1]-manifold."""


class PointNotOnPi0Error(DgvcError):
    pass


class UnsupportedShapeError(DgvcError):
    """The presentation shape is outside what an operation supports."""


class VirtualClassInputError(DgvcError):
    """An honest bundle was required but a virtual class was given."""


class PoleError(DgvcError):
    """A rational function has a genuine pole at the evaluation point."""


class NonIsolatedFixedLocusError(DgvcError):
    pass


class ZeroWeightError(DgvcError):
    """A moving character is trivial, so its lambda class is not invertible."""


class SimplificationError(DgvcError):
    """A fixed-point sum did not simplify to a Laurent polynomial."""
