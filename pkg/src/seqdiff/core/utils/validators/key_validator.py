"""
Configuration Key Validator
Rejects unknown keys and blocks that are not JSON objects
"""

from typing import Any, Dict, List

from seqdiff.core.utils.validation_helpers import ConfigWalker, FieldSpec


class ConfigKeyValidator:
    """Validates that every key is known and every block is an object"""

    def validate(self, raw: Dict[str, Any], schema: Dict[str, Any]) -> List[str]:
        """
        Validate configuration keys

        Args:
            raw: Parsed JSON configuration
            schema: Nested schema of FieldSpec entries

        Returns:
            List of validation error messages
        """
        errors = []
        for path, block, block_schema in ConfigWalker.blocks(raw, schema):
            for key in block:
                if key not in block_schema:
                    allowed = ", ".join(sorted(block_schema))
                    errors.append(
                        f"CONFIG_UNKNOWN_KEY_ERROR: '{key}' is not a valid key in "
                        f"{path}. Fix: use one of {allowed}"
                    )
            for key, spec in block_schema.items():
                if not isinstance(spec, FieldSpec) and key in block:
                    if not isinstance(block[key], dict):
                        name = key if path == "<root>" else f"{path}.{key}"
                        errors.append(
                            f"CONFIG_BLOCK_ERROR: '{name}' must be a JSON object. "
                            f"Fix: write it as {{...}}"
                        )
        return errors
