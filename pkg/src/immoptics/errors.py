"""Exception types raised across the package."""


class ImmopticsError(Exception):
    """Base class for all package errors."""


class SizeLimitError(ImmopticsError, ValueError):
    """A problem size exceeds the configured cap of an exact kernel."""


class DimensionError(ImmopticsError, ValueError):
    """Operands have incompatible shapes or sizes."""


class UnitarityError(ImmopticsError, ValueError):
    """A matrix expected to be unitary is not."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class DegenerateStateError(ImmopticsError, ValueError):
    """The input state has (numerically) vanishing norm."""


class UnsupportedSchemeError(ImmopticsError, ValueError):
    """A delay scheme does not produce integer Gaussian exponents."""


class InternalConsistencyError(ImmopticsError, ArithmeticError):
    """A computed quantity violates a mathematical guarantee."""


class DependentBasisError(ImmopticsError, ValueError):
    """Requested basis immanants are linearly dependent."""


class BasisSpanError(ImmopticsError, ValueError):
    """Requested basis immanants do not span the quadratic form."""
