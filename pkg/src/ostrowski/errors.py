"""Exception hierarchy shared by every module.

Each error can carry a little context (module, operation, index) so the CLI
can report it as a machine-readable object.
"""

from __future__ import annotations


class OstrowskiError(Exception):
    """Base class for all library errors."""

    module: str = ""

    def __init__(self, message: str, *, operation: str | None = None,
                 index: int | None = None, **details):
        super().__init__(message)
        self.message = message
        self.operation = operation
        self.index = index
        self.details = details

    def to_dict(self) -> dict:
        out = {
            "type": type(self).__name__,
            "message": self.message,
            "module": self.module,
            "operation": self.operation,
            "index": self.index,
        }
        for key, value in self.details.items():
            out[key] = value
        return out


class LiteralError(OstrowskiError, ValueError):
    module = "literals"


class MixedFields(OstrowskiError, ValueError):
    """Operands live in different quadratic fields."""
    module = "exactreal"


class DivisionByZero(OstrowskiError, ZeroDivisionError):
    module = "exactreal"


class PrecisionExhausted(OstrowskiError, ArithmeticError):
    """An enclosure could not be narrowed enough within the refinement budget."""
    module = "exactreal"


class InvalidBase(OstrowskiError, ValueError):
    """The base must be an irrational number in (0, 1)."""
    module = "cfrac"


class RationalBase(InvalidBase):
    pass


class DigitsExhausted(OstrowskiError, IndexError):
    module = "cfrac"


class IdentityViolation(OstrowskiError, ArithmeticError):
    module = "cfrac"


class SeedOutOfRange(OstrowskiError, ValueError):
    module = "ostrowski"


class InadmissibleDigits(OstrowskiError, ValueError):
    module = "ostrowski"


class CapExceeded(OstrowskiError, ValueError):
    module = "oracle"


class UsageError(OstrowskiError, ValueError):
    """Malformed or contradictory command-line arguments."""
    module = "cli"
