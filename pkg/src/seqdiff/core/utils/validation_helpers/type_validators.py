"""
Type validation utilities for configuration validators
Provides field specifications and checks of JSON values against them
"""

import math
from dataclasses import dataclass
from typing import Any, Optional, Tuple

FIELD_KINDS = ("int", "float", "str", "bool", "int_list", "float_list")


@dataclass(frozen=True)
class FieldSpec:
    """
    Expected type, default and admissible range of one configuration field

    Attributes:
        kind: One of FIELD_KINDS
        default: Value used when the key is absent
        nullable: Whether JSON null is accepted
        choices: Admissible values for str fields
        minimum: Smallest admissible value (numbers, list items)
        maximum: Largest admissible value
        exclusive_minimum: Whether minimum itself is excluded
        exclusive_maximum: Whether maximum itself is excluded
    """

    kind: str
    default: Any = None
    nullable: bool = False
    choices: Optional[Tuple[str, ...]] = None
    minimum: Optional[float] = None
    maximum: Optional[float] = None
    exclusive_minimum: bool = False
    exclusive_maximum: bool = False


class ValidationUtils:
    """Collection of reusable validation utility methods"""

    @staticmethod
    def is_int(value: Any) -> bool:
        """True for JSON integers (booleans excluded)"""
        return isinstance(value, int) and not isinstance(value, bool)

    @staticmethod
    def is_number(value: Any) -> bool:
        """True for finite JSON numbers (booleans excluded)"""
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        return math.isfinite(value)

    @staticmethod
    def matches_kind(value: Any, kind: str) -> bool:
        """
        Check a JSON value against a field kind

        Args:
            value: Parsed JSON value
            kind: One of FIELD_KINDS

        Returns:
            True if value has the expected type
        """
        if kind == "int":
            return ValidationUtils.is_int(value)
        if kind == "float":
            return ValidationUtils.is_number(value)
        if kind == "str":
            return isinstance(value, str)
        if kind == "bool":
            return isinstance(value, bool)
        if kind == "int_list":
            return isinstance(value, list) and all(
                ValidationUtils.is_int(v) for v in value
            )
        if kind == "float_list":
            return isinstance(value, list) and all(
                ValidationUtils.is_number(v) for v in value
            )
        return False

    @staticmethod
    def within_range(value: float, spec: FieldSpec) -> bool:
        """Check a number against the spec's bounds"""
        low, high = spec.minimum, spec.maximum
        if low is not None and (
            value < low or (spec.exclusive_minimum and value == low)
        ):
            return False
        if high is not None and (
            value > high or (spec.exclusive_maximum and value == high)
        ):
            return False
        return True

    @staticmethod
    def describe_range(spec: FieldSpec) -> str:
        """Human-readable interval such as '[0, 1]' or '(0, inf)'"""
        low = "-inf" if spec.minimum is None else f"{spec.minimum:g}"
        high = "inf" if spec.maximum is None else f"{spec.maximum:g}"
        left = "(" if spec.exclusive_minimum or spec.minimum is None else "["
        right = ")" if spec.exclusive_maximum or spec.maximum is None else "]"
        return f"{left}{low}, {high}{right}"

    @staticmethod
    def is_strictly_ascending(values) -> bool:
        return all(b > a for a, b in zip(values, values[1:]))
