"""Typed failures of the toolkit.

Every error carries the process exit code the CLI reports for it:
0 success, 2 validation, 3 numerical divergence, 4 IO.
"""

from typing import Any, Dict, List, Optional


class ToolkitError(Exception):
    """Base class for all toolkit failures"""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ConfigurationError(ToolkitError):
    """A request that violates a documented precondition"""

    exit_code = 2


class CflViolationError(ConfigurationError):
    pass


class SizeLimitError(ConfigurationError):
    """Dense multilinear path requested above its grid-size ceiling"""


class ResolutionError(ConfigurationError):
    pass


class ConeViolationError(ConfigurationError):
    """Group-velocity cone leaves the admissible part of the box"""

    def __init__(self, message: str, max_admissible_time: float):
        super().__init__(message, {"max_admissible_time": max_admissible_time})
        self.max_admissible_time = max_admissible_time


class NumericalError(ToolkitError):
    exit_code = 3


class DivergenceError(NumericalError):
    """Picard iteration failed to contract"""

    def __init__(self, message: str, factor_history: List[float]):
        super().__init__(message, {"contraction_factors": list(factor_history)})
        self.factor_history = list(factor_history)


class DomainDegeneracyError(NumericalError):
    """Surface too close to the bottom (sup|h| >= 1/2)"""


class NonFiniteMultiplierError(NumericalError):
    def __init__(self, message: str, lattice_point: tuple):
        super().__init__(message, {"lattice_point": list(lattice_point)})
        self.lattice_point = lattice_point


class ReportIOError(ToolkitError):
    exit_code = 4

    def __init__(self, message: str, path: str):
        super().__init__(message, {"path": str(path)})
        self.path = str(path)
