# lkgeom/adapter/error/error.py
from typing import Any, Dict


class LKGeomError(Exception):
    exit_code: int = 1
    error_code: str = "UNKNOWN_ERROR"

    def __init__(self, detail: str, error_code: str = None, exit_code: int = None):
        self.detail = detail
        if error_code is not None:
            self.error_code = error_code
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(detail)

    def to_body(self) -> Dict[str, Any]:
        return {"error": self.error_code, "detail": self.detail, "exit": self.exit_code}


class ValidationError(LKGeomError):
    """Malformed or inconsistent input data."""
    exit_code = 1
    error_code = "VALIDATION_ERROR"


class DomainError(ValidationError):
    """Argument outside the mathematical domain of an operation."""
    error_code = "DOMAIN_ERROR"


class NumericalDiagnosticError(LKGeomError):
    """A numerical kernel could not certify its result (genericity, resampling budget)."""
    exit_code = 2
    error_code = "NUMERICAL_DIAGNOSTIC"


class InconclusiveError(NumericalDiagnosticError):
    error_code = "INCONCLUSIVE"


class InputOutputError(LKGeomError):
    exit_code = 3
    error_code = "IO_ERROR"
