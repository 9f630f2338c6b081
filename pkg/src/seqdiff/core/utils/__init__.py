"""
Core utilities for SeqDiff
Provides configuration validators and validation helpers
"""

from .validation_helpers import (
    FIELD_KINDS,
    FieldSpec,
    ValidationUtils,
    ConfigWalker,
)

from .validators import (
    ConfigKeyValidator,
    ConfigTypeValidator,
    ConfigRangeValidator,
    ConfigConsistencyValidator,
)

__all__ = [
    # Validation helpers
    "FIELD_KINDS",
    "FieldSpec",
    "ValidationUtils",
    "ConfigWalker",
    # Validators
    "ConfigKeyValidator",
    "ConfigTypeValidator",
    "ConfigRangeValidator",
    "ConfigConsistencyValidator",
]
