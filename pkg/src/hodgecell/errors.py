"""Exception classes raised by hodgecell."""


class HodgeError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidFrame(HodgeError):
    """The frame data (weight, Hodge numbers, forms) is inconsistent."""


class SingularForm(InvalidFrame):
    """The intersection/polarization form is singular within tolerance."""


class ParityViolation(InvalidFrame):
    """The form does not satisfy ``Q.T == (-1)**n * Q``."""


class InvalidFiltration(HodgeError):
    """Span data does not describe a nested flag with the frame's dimensions."""


class DimensionMismatch(HodgeError):
    pass


class FrameMismatch(HodgeError):
    pass


class NotAHodgeStructure(HodgeError):
    """The filtration lies in the compact dual but is not transverse to its conjugate."""


class DegenerateDecomposition(HodgeError):
    pass


class SingularBase(HodgeError):
    pass


class NotInCell(HodgeError):
    """A leading principal block submatrix is singular.

    ``level`` is the filtration index ``k`` whose block submatrix
    ``[A^{i,j}]_{0<=i,j<=n-k}`` failed; the point lies outside the unipotent
    cell of the base.
    """

    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"not in the unipotent cell (level k={level})")


class LevelOutOfRange(HodgeError):
    pass


class IndexOutOfRange(HodgeError):
    pass


class BaseMismatch(HodgeError):
    pass


class StepTooLarge(HodgeError):
    pass


class UnsupportedFrame(HodgeError):
    """The operation is only defined for a restricted class of frames."""
