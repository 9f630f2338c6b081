"""
Configuration Type Validator
Validates that every field value has the JSON type its schema declares
"""

from typing import Any, Dict, List

from seqdiff.core.utils.validation_helpers import ConfigWalker, ValidationUtils

_KIND_NAMES = {
    "int": "an integer",
    "float": "a number",
    "str": "a string",
    "bool": "true or false",
    "int_list": "a list of integers",
    "float_list": "a list of numbers",
}


class ConfigTypeValidator:
    """Validates field value types"""

    def validate(self, raw: Dict[str, Any], schema: Dict[str, Any]) -> List[str]:
        """
        Validate field types

        Args:
            raw: Parsed JSON configuration
            schema: Nested schema of FieldSpec entries

        Returns:
            List of validation error messages
        """
        errors = []
        for name, spec, value in ConfigWalker.fields(raw, schema):
            if value is None:
                if not spec.nullable:
                    errors.append(
                        f"CONFIG_TYPE_ERROR: '{name}' must not be null. "
                        f"Fix: give {_KIND_NAMES[spec.kind]} or remove the key"
                    )
                continue
            if not ValidationUtils.matches_kind(value, spec.kind):
                errors.append(
                    f"CONFIG_TYPE_ERROR: '{name}' must be {_KIND_NAMES[spec.kind]}, "
                    f"got {value!r}. Fix: correct the value type"
                )
        return errors
