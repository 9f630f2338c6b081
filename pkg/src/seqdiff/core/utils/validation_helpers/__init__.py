"""
Validation helpers for configuration validators
Provides field specifications, type checks and block traversal
"""

from .type_validators import FIELD_KINDS, FieldSpec, ValidationUtils
from .config_walker import ConfigWalker

__all__ = [
    "FIELD_KINDS",
    "FieldSpec",
    "ValidationUtils",
    "ConfigWalker",
]
