"""
Configuration Range Validator
Validates numeric bounds and enumerated string choices
"""

from typing import Any, Dict, List

from seqdiff.core.utils.validation_helpers import (
    ConfigWalker,
    FieldSpec,
    ValidationUtils,
)


class ConfigRangeValidator:
    """Validates value ranges of well-typed fields"""

    def validate(self, raw: Dict[str, Any], schema: Dict[str, Any]) -> List[str]:
        """
        Validate ranges and choices; mistyped values are left to the type validator

        Args:
            raw: Parsed JSON configuration
            schema: Nested schema of FieldSpec entries

        Returns:
            List of validation error messages
        """
        errors = []
        for name, spec, value in ConfigWalker.fields(raw, schema):
            if value is None or not ValidationUtils.matches_kind(value, spec.kind):
                continue
            if spec.choices is not None and value not in spec.choices:
                errors.append(
                    f"CONFIG_CHOICE_ERROR: '{name}' is '{value}'. "
                    f"Fix: use one of {', '.join(spec.choices)}"
                )
            errors.extend(self._check_numbers(name, spec, value))
        return errors

    def _check_numbers(self, name: str, spec: FieldSpec, value: Any) -> List[str]:
        if spec.kind in ("int", "float"):
            values = [value]
        elif spec.kind in ("int_list", "float_list"):
            values = value
        else:
            return []
        bad = [v for v in values if not ValidationUtils.within_range(v, spec)]
        if not bad:
            return []
        return [
            f"CONFIG_RANGE_ERROR: '{name}' has value(s) {bad} outside "
            f"{ValidationUtils.describe_range(spec)}. Fix: choose a value in range"
        ]
