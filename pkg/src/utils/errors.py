"""
Exception hierarchy for clanroute.

Every failure raised by the library is either an input problem (the caller
handed us something malformed) or a violated inequality (a proven bound did
not hold, which is a defect in the construction). The CLI maps the first to
exit status 1 and the second to exit status 2.
"""

from typing import Any


class ClanRouteError(Exception):
    """Base class for all clanroute errors."""

    kind = "error"

    def one_line(self) -> str:
        """Render the error as a single machine-parsable line."""
        message = str(self).replace('"', "'").replace("\n", " ")
        return f'error kind={self.kind} message="{message}"'


class InputError(ClanRouteError, ValueError):
    """Raised when an input file, flag or parameter fails validation."""

    kind = "input"


class ParseError(InputError):
    """Raised for a malformed line in a text input file."""

    def __init__(self, path: str, line_no: int, reason: str) -> None:
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {reason}")


class InequalityViolation(ClanRouteError, AssertionError):
    """Raised when an asserted inequality fails.

    Attributes:
        inequality: Short name of the violated inequality.
        lhs: Left-hand side value.
        rhs: Right-hand side value (the bound).
        detail: Optional context, e.g. the worst pair.
    """

    kind = "violation"

    def __init__(
        self, inequality: str, lhs: float, rhs: float, detail: Any = None
    ) -> None:
        self.inequality = inequality
        self.lhs = lhs
        self.rhs = rhs
        self.detail = detail
        text = f"{inequality}: {lhs!r} > {rhs!r}"
        if detail is not None:
            text += f" ({detail})"
        super().__init__(text)

    def one_line(self) -> str:
        detail = "" if self.detail is None else str(self.detail).replace('"', "'")
        return (
            f"error kind=violation inequality={self.inequality} "
            f'lhs={self.lhs!r} rhs={self.rhs!r} detail="{detail}"'
        )
