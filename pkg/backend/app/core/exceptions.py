"""
Custom exceptions for the toolkit with error-code tracking
"""

from enum import Enum
from typing import Any, Optional


class ErrorCode(str, Enum):
    """Standardized error codes."""

    # Usage / configuration (1xxx)
    CFG_INVALID_CONFIG = "CFG_1001"
    CFG_MISSING_ARTIFACT = "CFG_1002"
    CFG_INVALID_ARGUMENT = "CFG_1003"

    # Input data (2xxx)
    DATA_FLIGHT_LOG_INVALID = "DATA_2001"
    DATA_DEGENERATE = "DATA_2002"
    DATA_UNDEFINED_NORMALIZATION = "DATA_2003"
    DATA_ZERO_DENOMINATOR = "DATA_2004"
    DATA_GENOME_SHAPE = "DATA_2005"
    DATA_PLAN_MISMATCH = "DATA_2006"

    # Simulation (3xxx)
    SIM_STATE_CORRUPTION = "SIM_3001"

    # Evolution (4xxx)
    EVO_CHECKPOINT_INVALID = "EVO_4001"

    # System (5xxx)
    SYS_INTERNAL_ERROR = "SYS_5001"


# Codes that indicate a usage problem rather than a failed run
USAGE_CODES = frozenset({
    ErrorCode.CFG_INVALID_CONFIG,
    ErrorCode.CFG_MISSING_ARTIFACT,
    ErrorCode.CFG_INVALID_ARGUMENT,
})


class BlimpError(Exception):
    """Base exception for the toolkit with error-code tracking"""

    def __init__(
        self,
        message: str,
        code: ErrorCode = ErrorCode.SYS_INTERNAL_ERROR,
        details: Optional[dict[str, Any]] = None
    ):
        self.message = message
        self.code = code
        self.details = details or {}
        super().__init__(self.message)

    @property
    def exit_code(self) -> int:
        """Process exit code: 2 for usage errors, 1 for runtime failures."""
        return 2 if self.code in USAGE_CODES else 1

    def to_dict(self) -> dict[str, Any]:
        """Error record for logs and reports."""
        return {
            "error": {
                "message": self.message,
                "code": self.code.value,
                "details": self.details
            }
        }


class ConfigurationError(BlimpError):
    """Invalid configuration file, values or flags"""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, code=ErrorCode.CFG_INVALID_CONFIG, details=details)


class ArtifactNotFoundError(BlimpError):
    """Input file (config, genome, log, report) does not exist"""

    def __init__(self, kind: str, path: Any):
        super().__init__(
            f"{kind} file '{path}' not found",
            code=ErrorCode.CFG_MISSING_ARTIFACT,
            details={"kind": kind, "path": str(path)}
        )


class StateCorruptionError(BlimpError):
    """Non-finite plant state or command"""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, code=ErrorCode.SIM_STATE_CORRUPTION, details=details)


class GenomeShapeError(BlimpError):
    """Genome parameters do not match the network layout"""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, code=ErrorCode.DATA_GENOME_SHAPE, details=details)


class FlightLogError(BlimpError):
    """Flight log violates the sampling contract"""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, code=ErrorCode.DATA_FLIGHT_LOG_INVALID, details=details)


class DegenerateDataError(BlimpError):
    """Regression problem is rank deficient (no excitation)"""

    def __init__(self, rank: int, expected: int):
        super().__init__(
            f"Regression matrix has rank {rank}, expected {expected}; data lacks excitation",
            code=ErrorCode.DATA_DEGENERATE,
            details={"rank": rank, "expected": expected}
        )


class UndefinedNormalizationError(BlimpError):
    """Normalizing signal has zero energy"""

    def __init__(self, message: str = "Observed signal is all zeros; NRMSAE is undefined"):
        super().__init__(message, code=ErrorCode.DATA_UNDEFINED_NORMALIZATION)


class ZeroDenominatorError(BlimpError):
    """Ratio metric with a zero reference sum"""

    def __init__(self, metric: str):
        super().__init__(
            f"Reference series for {metric} sums to zero magnitude",
            code=ErrorCode.DATA_ZERO_DENOMINATOR,
            details={"metric": metric}
        )


class PlanMismatchError(BlimpError):
    """Reports compared across different waypoint plans or plants"""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, code=ErrorCode.DATA_PLAN_MISMATCH, details=details)


class CheckpointError(BlimpError):
    """Checkpoint cannot be used to resume this run"""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, code=ErrorCode.EVO_CHECKPOINT_INVALID, details=details)


class UsageError(BlimpError):
    """Unknown flag or invalid command-line argument"""

    def __init__(self, message: str):
        super().__init__(message, code=ErrorCode.CFG_INVALID_ARGUMENT)
