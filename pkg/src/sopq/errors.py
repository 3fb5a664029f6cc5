"""Exception hierarchy shared by all modules."""


class SopqError(Exception):
    """Base class for library errors."""


class MalformedInputError(SopqError, ValueError):
    """Input has the wrong shape, length or type."""


class InvalidSignatureError(SopqError, ValueError):
    """Operation is undefined for the given signature."""


class MembershipError(SopqError, ValueError):
    """A matrix or vector fails a defining identity beyond tolerance.

    The offending residual is kept on ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class OffSurfaceError(MembershipError):
    """A vector does not lie on the requested quasi-sphere."""


class ComponentError(MembershipError):
    """Element lies outside the identity component."""


class DegeneracyError(SopqError, ArithmeticError):
    """Gram-Schmidt hit a (near) null pivot.

    ``stage`` is the index of the vector being produced when it failed.
    """

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class SpectralError(SopqError, ArithmeticError):
    """Matrix is not symmetric positive-definite."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class OutOfScopeError(SopqError, ValueError):
    """Request falls outside what this library computes."""


class RoutedToCaseAnalysis(SopqError):
    """An exact sequence does not match the generic rules R1-R3."""


class ConsistencyError(SopqError, AssertionError):
    """An internal postcondition failed. Should never fire."""
