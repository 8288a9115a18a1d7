"""
Error hierarchy for the block-conjugacy toolkit.

Every error carries the module it was raised from, so messages surfaced by
the CLI read like ``[ideal_arith] ideals live over different fields``.
"""

from typing import Optional


class ToralError(Exception):
    """Base class for every error raised by the package."""

    module = "blockconj"

    def __init__(self, message: str, *, module: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if module is not None:
            self.module = module

    def __str__(self) -> str:
        return f"[{self.module}] {self.message}"


# =========================================
# INPUT ERRORS (exit code 2)
# =========================================

class InputError(ToralError, ValueError):
    """Malformed text handed to a parser."""

    module = "cli"


class ContextMismatchError(ToralError, ValueError):
    """Two values live over different minimal polynomials."""

    module = "number_field"


class NotUnimodularError(ToralError, ValueError):
    module = "exact_linalg"


class ReducibleError(ToralError, ValueError):
    module = "number_field"


class CharpolyMismatchError(ToralError, ValueError):
    module = "block_conjugacy"


class NonUnitError(ToralError, ValueError):
    """|f(0)| != 1 where beta has to act as an automorphism."""

    module = "lmt_correspondence"


class RankDeficientError(ToralError, ValueError):
    module = "ideal_arith"


class PreconditionError(ToralError, ValueError):
    module = "block_conjugacy"


class ZeroElementError(ToralError, ZeroDivisionError):
    module = "number_field"


# =========================================
# INTERNAL FAILURES (exit code 1)
# =========================================

class VerificationError(ToralError, RuntimeError):
    """An exact self-check failed. Signals a bug, never bad input."""


class SearchExhaustedError(ToralError, RuntimeError):
    """A search whose success is guaranteed ran out of budget."""


def exit_code_for(error: Exception) -> int:
    """Map an exception onto the CLI exit status."""
    if isinstance(error, (VerificationError, SearchExhaustedError)):
        return 1
    return 2
