"""Error types shared by the frontend and the driver."""

from __future__ import annotations

from .ast import SourceLocation


class CvlError(Exception):
    """Base for all source-level errors; carries a location."""

    def __init__(self, message: str, loc: SourceLocation):
        super().__init__(f"{loc}: {message}")
        self.message = message
        self.loc = loc


class LexError(CvlError):
    pass


class ParseError(CvlError):
    pass


class ResolveError(CvlError):
    pass


class BudgetExceeded(Exception):
    """Per-function analysis budget ran out; partial results are kept."""

    def __init__(self, function: str):
        super().__init__(f"node budget exceeded while analyzing '{function}'")
        self.function = function
