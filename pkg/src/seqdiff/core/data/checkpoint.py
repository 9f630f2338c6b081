"""
Checkpoint persistence
A text envelope (magic line + JSON header) followed by little-endian raw arrays
and a trailing SHA-256 line over everything before it
"""

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from seqdiff.core.errors import CheckpointError, ChecksumError, CheckpointVersionError

logger = logging.getLogger(__name__)

MAGIC = b"SEQDIFF-CHECKPOINT\n"
FORMAT_VERSION = 1
_TRAILER_PREFIX = b"sha256:"
TRAILER_SIZE = len(_TRAILER_PREFIX) + 64 + 1


@dataclass
class CheckpointState:
    """
    Everything needed to resume or reuse a run

    Attributes:
        iteration: Number of completed training iterations
        config: Run configuration snapshot (JSON-compatible)
        arrays: Named arrays (parameters, optimizer moments, RNG states)
        meta: Extra JSON-compatible data (vocabulary, optimizer groups, ...)
    """

    iteration: int
    config: Dict[str, Any]
    arrays: Dict[str, np.ndarray] = field(default_factory=dict)
    meta: Dict[str, Any] = field(default_factory=dict)


def _little_endian(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    return array.astype(array.dtype.newbyteorder("<"), copy=False)


def encode_checkpoint(state: CheckpointState) -> bytes:
    """Serialize a checkpoint to bytes (header, payload, checksum trailer)"""
    manifest: List[Dict[str, Any]] = []
    chunks = []
    offset = 0
    for name, array in state.arrays.items():
        array = _little_endian(np.asarray(array))
        raw = array.tobytes()
        manifest.append(
            {
                "name": name,
                "dtype": array.dtype.str,
                "shape": list(array.shape),
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        chunks.append(raw)
        offset += len(raw)
    header = {
        "version": FORMAT_VERSION,
        "iteration": state.iteration,
        "config": state.config,
        "meta": state.meta,
        "arrays": manifest,
    }
    body = (
        MAGIC
        + json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
        + b"\n"
        + b"".join(chunks)
    )
    digest = hashlib.sha256(body).hexdigest().encode("ascii")
    return body + _TRAILER_PREFIX + digest + b"\n"


def decode_checkpoint(data: bytes, source: str = "<bytes>") -> CheckpointState:
    """
    Parse checkpoint bytes

    Raises:
        ChecksumError: If the content does not match its trailer (e.g. truncation)
        CheckpointVersionError: If the format version is not supported
        CheckpointError: If the envelope is otherwise malformed
    """
    if len(data) < len(MAGIC) + TRAILER_SIZE:
        raise ChecksumError(f"checkpoint '{source}' is truncated")
    body, trailer = data[:-TRAILER_SIZE], data[-TRAILER_SIZE:]
    if not trailer.startswith(_TRAILER_PREFIX) or not trailer.endswith(b"\n"):
        raise ChecksumError(f"checkpoint '{source}' has no valid checksum trailer")
    expected = trailer[len(_TRAILER_PREFIX) : -1].decode("ascii", errors="replace")
    if hashlib.sha256(body).hexdigest() != expected:
        raise ChecksumError(f"checkpoint '{source}' failed checksum verification")
    if not body.startswith(MAGIC):
        raise CheckpointError(f"'{source}' is not a seqdiff checkpoint")

    header_end = body.find(b"\n", len(MAGIC))
    try:
        header = json.loads(body[len(MAGIC) : header_end].decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as e:
        raise CheckpointError(f"checkpoint '{source}' has a corrupt header: {e}")
    version = header.get("version")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(
            f"checkpoint '{source}' has format version {version}, "
            f"expected {FORMAT_VERSION}"
        )

    payload = body[header_end + 1 :]
    arrays: Dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        start = entry["offset"]
        raw = payload[start : start + entry["nbytes"]]
        if len(raw) != entry["nbytes"]:
            raise CheckpointError(f"array '{entry['name']}' in '{source}' is short")
        array = np.frombuffer(raw, dtype=np.dtype(entry["dtype"]))
        arrays[entry["name"]] = array.reshape(entry["shape"]).copy()
    return CheckpointState(
        iteration=int(header["iteration"]),
        config=header["config"],
        arrays=arrays,
        meta=header.get("meta", {}),
    )


def save_checkpoint(state: CheckpointState, path: str) -> None:
    """Write a checkpoint atomically (temporary file + rename)"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    data = encode_checkpoint(state)
    try:
        with open(tmp, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, target)
    except OSError as e:
        raise CheckpointError(f"Failed to write checkpoint '{path}': {e}") from e
    logger.info(f"Saved checkpoint at iteration {state.iteration} to {path}")


def load_checkpoint(path: str) -> CheckpointState:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"Failed to read checkpoint '{path}': {e}") from e
    state = decode_checkpoint(data, source=str(path))
    logger.debug(f"Loaded checkpoint '{path}' at iteration {state.iteration}")
    return state
