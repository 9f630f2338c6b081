"""
Unit tests for checkpoint persistence
"""

import hashlib

import numpy as np
import pytest

from seqdiff.core.data import (
    CheckpointState,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from seqdiff.core.errors import (
    CheckpointError,
    CheckpointVersionError,
    ChecksumError,
)


def _state():
    return CheckpointState(
        iteration=7,
        config={"task": {"kind": "copy"}},
        arrays={
            "model/w": np.arange(6, dtype=np.float64).reshape(2, 3),
            "rng/time": np.arange(4, dtype=np.uint8),
        },
        meta={"vocab": ["a", "b"]},
    )


class TestCheckpointFormat:
    """Test encode/decode"""

    def test_restores_state(self):
        """Should restore iteration, config, meta and arrays exactly"""
        state = decode_checkpoint(encode_checkpoint(_state()))

        assert state.iteration == 7
        assert state.config == {"task": {"kind": "copy"}}
        assert state.meta == {"vocab": ["a", "b"]}
        assert np.array_equal(state.arrays["model/w"], _state().arrays["model/w"])
        assert state.arrays["rng/time"].dtype == np.uint8

    def test_truncation_detected(self):
        """Should report truncated content as a checksum failure"""
        data = encode_checkpoint(_state())

        with pytest.raises(ChecksumError):
            decode_checkpoint(data[:-10])

    def test_bit_flip_detected(self):
        """Should detect a flipped payload byte"""
        data = bytearray(encode_checkpoint(_state()))
        data[len(data) // 2] ^= 0x01

        with pytest.raises(ChecksumError):
            decode_checkpoint(bytes(data))

    def test_version_mismatch(self):
        """Should reject checkpoints of another format version"""
        data = encode_checkpoint(_state())
        body = data[: -(len("sha256:") + 65)].replace(b'"version":1', b'"version":9')
        digest = hashlib.sha256(body).hexdigest().encode("ascii")
        with pytest.raises(CheckpointVersionError):
            decode_checkpoint(body + b"sha256:" + digest + b"\n")


class TestCheckpointFiles:
    """Test atomic save and load"""

    def test_save_load(self, tmp_path):
        """Should write atomically and read the same state back"""
        path = tmp_path / "nested" / "checkpoint.bin"
        save_checkpoint(_state(), str(path))

        assert load_checkpoint(str(path)).iteration == 7
        assert not (tmp_path / "nested" / "checkpoint.bin.tmp").exists()

    def test_missing_file(self, tmp_path):
        """Should wrap read failures"""
        with pytest.raises(CheckpointError):
            load_checkpoint(str(tmp_path / "absent.bin"))
