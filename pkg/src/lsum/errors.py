"""Exception hierarchy shared by every lsum module."""


class LSumError(Exception):
    """Base class for all errors raised by lsum."""


class DomainError(LSumError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnboundAtomError(LSumError, KeyError):
    """A formal atom has no numeric binding."""


class NumericError(LSumError, ArithmeticError):
    """A floating-point computation produced a non-finite value."""


class MixedScalarError(LSumError, TypeError):
    """Floats were combined with exact (rational or formal) scalars."""


class ParseError(LSumError):
    """Malformed expression text. ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class EvaluationError(LSumError):
    """An array entry cannot be evaluated under the requested backend."""


class DimensionError(LSumError, ValueError):
    """The array has the wrong dimension for the requested operation."""


class MethodNotApplicable(LSumError):
    """The requested L-summing method does not apply to this array."""


class UnsupportedOrder(DomainError):
    """A polygamma order outside the supported range was requested."""
