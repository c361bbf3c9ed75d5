"""
Errors Module
Exception hierarchy shared by every valgen module
"""

from typing import Any, Dict, Optional


class ValgenError(Exception):
    """Base class for all valgen errors"""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "context": {key: str(value) for key, value in self.context.items()},
        }


class FieldMismatch(ValgenError):
    """Operands live over different fields"""


class ParseError(ValgenError):
    """Polynomial, series, value or spec text could not be parsed"""


class PreconditionError(ValgenError):
    """An operation was called outside its domain"""


class NonMonicDivisor(PreconditionError):
    """Division or expansion by a non-monic or constant polynomial"""


class NotCentered(PreconditionError):
    """A graded-algebra check was requested for a non-centered valuation"""


class PrecisionExhausted(ValgenError):
    """A series has no support below its precision, so its leading exponent is unknown"""

    def __init__(self, message: str, precision: Optional[Any] = None, **context: Any):
        super().__init__(message, precision=precision, **context)
        self.precision = precision


class NoEligibleQ(ValgenError):
    """No member of the set has small enough degree and a matching truncation"""

    def __init__(self, message: str, witness: Any = None, **context: Any):
        super().__init__(message, witness=witness, **context)
        self.witness = witness


class UnsupportedShape(ValgenError):
    """The requested decision is only implemented for certain input shapes"""


class CertificateError(ValgenError):
    """A produced certificate failed its own verification"""
