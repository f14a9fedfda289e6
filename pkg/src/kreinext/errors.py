"""Exception types shared across the library."""


class KreinextError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(KreinextError):
    """Inputs have incompatible or invalid dimensions."""


class BadShape(ShapeMismatch):
    """Requested instance dimensions are out of range."""


class NotPSD(KreinextError):
    """A matrix required to be positive semidefinite is not."""


class NotSymmetric(KreinextError):
    """A matrix required to be symmetric is not."""


class NotPositiveForm(KreinextError):
    """The quadratic form of a partial operator takes negative values."""


class InconsistentAction(KreinextError):
    """The prescribed columns do not define a linear map on the domain."""


class NoExtension(KreinextError):
    """No positive self-adjoint extension exists."""


class NotExtension(KreinextError):
    """The candidate operator does not extend the partial operator."""


class NotContraction(KreinextError):
    """The prescribed action has norm exceeding one on its domain."""


class DomainMismatch(KreinextError):
    """Two partial operators do not share the same domain subspace."""


class NotSolvable(KreinextError):
    """The matrix equation has no positive semidefinite solution."""

    def __init__(self, solvability):
        super().__init__("no PSD solution exists; see attached solvability report")
        self.solvability = solvability


class PreconditionViolated(KreinextError):
    """A documented precondition of the operation does not hold."""


class OracleMismatch(KreinextError):
    """Two independent computations of the same quantity disagree."""


class RouteMismatch(OracleMismatch):
    """Independent decision routes returned different verdicts."""


class RangeIdentityViolated(OracleMismatch):
    """Two computations of the same range space disagree."""


class ParseError(KreinextError):
    """An instance or tolerance file is malformed."""


class MissingSection(ParseError):
    """The instance lacks a section required by the requested command."""
