"""Shared error type carrying a stable machine-readable code.

The wire protocol mirrors ``code`` verbatim in error responses, so codes are
part of the public surface and must not be renamed casually.
"""

from __future__ import annotations


class GridWalkError(Exception):
    """Failure with a stable ``code`` plus optional structured ``data``."""

    def __init__(self, code: str, message: str, **data):
        super().__init__(message)
        self.code = code
        self.message = message
        self.data = data

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class ParseError(GridWalkError):
    """Tokenizer or parser failure; ``position`` is a character offset."""

    def __init__(self, code: str, message: str, position: int, **data):
        super().__init__(code, message, position=position, **data)
        self.position = position


class ResolutionError(GridWalkError):
    """Target selection ended with no candidate or more than one."""
