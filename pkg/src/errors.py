# Error codes shared by every keycast module
from enum import Enum
from typing import Any, Dict


class ErrorCode(str, Enum):
    """Machine-readable failure codes carried by KeycastError."""

    # model
    CYCLIC = "CYCLIC"
    UNKNOWN_NODE = "UNKNOWN_NODE"
    SINK_IN_SOURCES = "SINK_IN_SOURCES"
    # code
    WIDTH_MISMATCH = "WIDTH_MISMATCH"
    NONINTEGRAL_ALPHABET = "NONINTEGRAL_ALPHABET"
    SPACE_LIMIT = "SPACE_LIMIT"
    # analysis
    BAD_COORDS = "BAD_COORDS"
    BAD_WITNESS = "BAD_WITNESS"
    BAD_RATE = "BAD_RATE"
    # transforms
    NOT_UNIFORM = "NOT_UNIFORM"
    MULTI_SOURCE = "MULTI_SOURCE"
    NONZERO_B = "NONZERO_B"
    NOT_LINEAR = "NOT_LINEAR"
    RANK_DEFICIENT = "RANK_DEFICIENT"
    MULTI_MESSAGE_SOURCE = "MULTI_MESSAGE_SOURCE"
    CAPACITY_EXCEEDED = "CAPACITY_EXCEEDED"
    KEY_NOT_SOURCE_FUNCTION = "KEY_NOT_SOURCE_FUNCTION"
    NOT_REDUCED_INSTANCE = "NOT_REDUCED_INSTANCE"
    # constructions
    BAD_ALPHA = "BAD_ALPHA"
    NOT_GAP_INSTANCE = "NOT_GAP_INSTANCE"
    UNSUPPORTED_R = "UNSUPPORTED_R"
    # search
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    # files
    BAD_FORMAT = "BAD_FORMAT"


# Codes the CLI reports as resource limits (exit code 3) rather than usage errors.
RESOURCE_CODES = frozenset({ErrorCode.SPACE_LIMIT, ErrorCode.BUDGET_EXCEEDED})


class KeycastError(ValueError):
    """Raised for every rejected input or exceeded limit."""

    def __init__(self, code: ErrorCode, message: str, **details: Any):
        super().__init__(f"{code.value}: {message}")
        self.code = code
        self.message = message
        self.details = details

    @property
    def is_resource_limit(self) -> bool:
        return self.code in RESOURCE_CODES

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code.value, "message": self.message, **self.details}
