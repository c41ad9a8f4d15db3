"""Exception types raised by the narrowband package."""


class NarrowbandError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(NarrowbandError, ValueError):
    """An input value is non-finite, out of range, or not a valid SU(2) element."""


class DegenerateAxisError(NarrowbandError, ValueError):
    """A rotation axis was requested for a unitary equal to +I or -I."""


class NotNarrowbandError(NarrowbandError, ValueError):
    """The sequence does not satisfy the first-order closure condition F1 = 0."""


class InvalidParamsError(NarrowbandError, ValueError):
    """TASK1 parameters are inconsistent with the requested net rotation."""


class NoSolutionError(NarrowbandError, ValueError):
    """The constraint curve has no point for the requested target angle."""


class RangeError(NarrowbandError, ArithmeticError):
    """A numerical quantity left the representable range."""
