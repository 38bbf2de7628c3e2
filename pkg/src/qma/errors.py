"""Exception hierarchy shared across the package."""


class QMAError(Exception):
    """Base class for all package errors."""


class BadOrder(QMAError, ValueError):
    pass


class BadPrime(QMAError, ValueError):
    pass


class FieldMismatch(QMAError, ValueError):
    pass


class ParseError(QMAError, ValueError):
    """Malformed expression text; ``pos`` is the 0-based character offset."""

    def __init__(self, msg, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            msg = f"{msg} at position {pos}"
        super().__init__(msg)


class UnknownGenerator(QMAError, KeyError):
    def __str__(self):
        return f"unknown generator {self.args[0]!r}"


class BadParams(QMAError, ValueError):
    pass


class BadPresentation(QMAError, ValueError):
    pass


class StepCapExceeded(QMAError, RuntimeError):
    """Rewriting did not terminate within the configured number of steps."""


class NotQNormal(QMAError, ValueError):
    pass


class NotOreTower(QMAError, ValueError):
    pass


class NotAPerfectSquare(QMAError, ArithmeticError):
    pass


class ZeroParameter(QMAError, ValueError):
    pass


class DimensionMismatch(QMAError, ValueError):
    pass


class NotInvariant(QMAError, ValueError):
    pass


class BadCharacteristic(QMAError, ValueError):
    pass
