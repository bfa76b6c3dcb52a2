"""Exception hierarchy.

Every error raised on purpose by the package derives from CharpError, so
callers (the CLI in particular) can separate user mistakes from bugs.
"""


class CharpError(Exception):
    """Base class for all package errors."""


class ParseError(CharpError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class DivisionByZero(CharpError, ZeroDivisionError):
    pass


class UndeclaredVariable(CharpError):
    pass


class ZeroInput(CharpError):
    pass


class NegativeValuation(CharpError):
    pass


class LengthMismatch(CharpError):
    pass


class DegreeMismatch(CharpError, ValueError):
    pass


class IndexOutOfRange(CharpError):
    pass


class NotClosed(CharpError):
    pass


class InternalLimit(CharpError):
    pass


class ZeroArgument(CharpError):
    pass


class ModulusNotP(CharpError):
    pass


class ModulusMismatch(CharpError):
    pass


class RamifiedInput(CharpError):
    pass


class WildInput(CharpError):
    pass


class UnsupportedResidueField(CharpError):
    pass


class ZeroDiscriminant(CharpError):
    pass


class A1Zero(CharpError):
    pass


class WrongCharacteristic(CharpError):
    pass


class ResourceLimit(CharpError):
    pass


class ContextMismatch(CharpError):
    pass


class UnsupportedInput(CharpError):
    """The input lies outside what the decision procedures handle."""
