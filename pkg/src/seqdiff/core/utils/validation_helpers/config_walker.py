"""
Traversal utilities for nested configuration blocks
"""

from typing import Any, Dict, Iterator, Tuple

from .type_validators import FieldSpec


class ConfigWalker:
    """Walks a raw configuration dict alongside its schema"""

    @staticmethod
    def blocks(
        raw: Dict[str, Any], schema: Dict[str, Any], prefix: str = ""
    ) -> Iterator[Tuple[str, Dict[str, Any], Dict[str, Any]]]:
        """
        Yield (dotted path, raw block, schema block) for every block present

        Args:
            raw: Parsed JSON object
            schema: Mapping of keys to FieldSpec or nested schema dicts
            prefix: Dotted path of raw within the whole config

        Yields:
            Each block whose raw value is a JSON object, depth-first
        """
        yield prefix or "<root>", raw, schema
        for key, sub_schema in schema.items():
            if isinstance(sub_schema, dict) and isinstance(raw.get(key), dict):
                path = f"{prefix}.{key}" if prefix else key
                yield from ConfigWalker.blocks(raw[key], sub_schema, path)

    @staticmethod
    def fields(
        raw: Dict[str, Any], schema: Dict[str, Any]
    ) -> Iterator[Tuple[str, FieldSpec, Any]]:
        """Yield (dotted path, spec, value) for every field present in raw"""
        for path, block, block_schema in ConfigWalker.blocks(raw, schema):
            for key, spec in block_schema.items():
                if isinstance(spec, FieldSpec) and key in block:
                    name = key if path == "<root>" else f"{path}.{key}"
                    yield name, spec, block[key]

    @staticmethod
    def resolve(raw: Dict[str, Any], schema: Dict[str, Any]) -> Dict[str, Any]:
        """Copy of raw with every missing field filled from the schema defaults"""
        resolved: Dict[str, Any] = {}
        for key, spec in schema.items():
            if isinstance(spec, dict):
                block = raw.get(key)
                resolved[key] = ConfigWalker.resolve(
                    block if isinstance(block, dict) else {}, spec
                )
            elif key in raw:
                resolved[key] = raw[key]
            else:
                default = spec.default
                resolved[key] = list(default) if isinstance(default, tuple) else default
        return resolved
