"""Exception hierarchy shared by every forge module.

All domain failures derive from :class:`ForgeError`; the CLI maps them to
exit code 1.
"""

from __future__ import annotations


class ForgeError(Exception):
    """Base class for domain failures."""


class InvalidBase(ForgeError, ValueError):
    """A base is < 2, or the two bases are multiplicatively dependent."""


class DomainError(ForgeError, ValueError):
    pass


class NoSecondDigit(DomainError):
    """The k-ary expansion has a single nonzero digit."""


class RangeError(ForgeError, ValueError):
    pass


class NotInS(ForgeError, ValueError):
    pass


class SuccessorUnbounded(ForgeError):
    """No successor in S(K) was found below the exponent cap.

    Absence below a cap is "unknown", not "none".
    """


class BudgetExhausted(ForgeError):
    pass


class ShapeError(ForgeError, ValueError):
    pass


class ParseError(ForgeError, ValueError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif position is not None:
            where = f" (offset {position})"
        super().__init__(message + where)


class ValidationError(ForgeError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message + (f" (line {line})" if line is not None else ""))


class NotHalted(ForgeError):
    pass


class VerificationFailed(ForgeError):
    """Internal consistency failure; a verified construction disagreed with its checker."""


class UnboundedQuantifier(ForgeError):
    pass


class CapTooSmall(ForgeError):
    pass


class ExpansionTooLarge(ForgeError):
    pass
