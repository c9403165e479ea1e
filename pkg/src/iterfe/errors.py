"""Exception hierarchy shared by every module of the package."""


class IterFEError(Exception):
    """Base class for all errors raised by iterfe."""


class ZeroInput(IterFEError, ValueError):
    pass


class DegenerateComposition(IterFEError, ZeroDivisionError):
    pass


class DivisionByNonUnit(IterFEError, ZeroDivisionError):
    pass


class CompositionAtUnit(IterFEError, ValueError):
    pass


class NotReversible(IterFEError, ValueError):
    pass


class NotFixingZero(IterFEError, ValueError):
    pass


class Obstructed(IterFEError):
    """The functional equation has no power-series solution.

    ``index`` is the resonant coefficient whose forcing term did not vanish.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"no power-series solution: obstruction at index {index}")


class NotContractive(IterFEError, ValueError):
    pass


class GroundFieldExtensionRequired(IterFEError, ValueError):
    pass


class UnsupportedMultiplier(IterFEError, ValueError):
    pass


class BoundaryReachable(IterFEError, ValueError):
    pass


class BudgetExceeded(IterFEError, ValueError):
    pass


class ParseError(IterFEError, ValueError):
    """Malformed expression; ``position`` is a 0-based character offset."""

    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class ExprSyntaxError(ParseError):
    pass


class NonIntegerExponent(ParseError):
    pass


class DivisionByZeroPolynomial(ParseError):
    pass
