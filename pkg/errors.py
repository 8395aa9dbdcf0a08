"""
Exception hierarchy for the zero-sum toolkit.

Library code raises these; the CLI and the database layer catch them, log them
and turn them into schema'd diagnostics or negative results.
"""

from typing import Any, Dict, Optional


class ZeroSumError(Exception):
    """Base class for every error raised by the toolkit"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the error to the diagnostic payload printed by the CLI

        Returns:
            Dictionary with the error class, message and details
        """
        return {
            "schema": 1,
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class GroupSpecError(ZeroSumError):
    """Malformed group text, invalid moduli or non-conforming elements"""


class FieldError(ZeroSumError):
    """Reducible or malformed modulus, or a field element out of range"""


class ParameterError(ZeroSumError):
    """A numeric parameter violates an operation's precondition"""


class CapExceededError(ZeroSumError):
    """A configured size cap (elements, DP cells, vertices, subsets) was exceeded"""

    def __init__(self, what: str, requested: int, limit: int):
        super().__init__(
            f"{what} needs {requested}, above the configured cap of {limit}",
            {"what": what, "requested": requested, "limit": limit},
        )
        self.what = what
        self.requested = requested
        self.limit = limit


class CertificateError(ZeroSumError):
    """A witness or certificate file is malformed"""


class FormatError(ZeroSumError):
    """A set, sequence, hypergraph or facts file cannot be parsed"""


class LedgerError(ZeroSumError):
    """An invalid shift or a provenance chain that does not replay"""
