"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class ATParityError(Exception):
    exit_code = 4


class InvalidInput(ATParityError, ValueError):
    """Bad argument: wrong parity, non-prime modulus, out-of-range code..."""

    exit_code = 2


class ResourceCapExceeded(ATParityError):
    """The requested order/prime is beyond the configured computational cap."""

    exit_code = 3


class DivisibilityError(ATParityError, ArithmeticError):
    """An exact division that must succeed did not. Always an implementation bug."""

    exit_code = 4


class OverflowGuard(ATParityError, OverflowError):
    exit_code = 4


class NotLatin(InvalidInput):
    """Base for Latin-square validation failures; ``index`` is 1-based."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class DuplicateInRow(NotLatin):
    pass


class DuplicateInColumn(NotLatin):
    pass


class SymbolOutOfRange(NotLatin):
    pass
