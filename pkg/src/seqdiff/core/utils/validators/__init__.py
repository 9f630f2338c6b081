"""
Configuration Validators
Provides modular validators for different aspects of run configuration validation
"""

from .key_validator import ConfigKeyValidator
from .type_validator import ConfigTypeValidator
from .range_validator import ConfigRangeValidator
from .consistency_validator import ConfigConsistencyValidator

__all__ = [
    "ConfigKeyValidator",
    "ConfigTypeValidator",
    "ConfigRangeValidator",
    "ConfigConsistencyValidator",
]
