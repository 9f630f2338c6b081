"""
Pytest configuration and shared fixtures
"""

import sys
from pathlib import Path
from typing import Optional

import pytest
import torch

# Add src to path for imports
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from seqdiff.core.data import SynthTaskSpec, build_synthetic_dataset  # noqa: E402
from seqdiff.core.model import DenoiserConfig, build_denoiser  # noqa: E402
from seqdiff.core.schedules import NoiseSchedule  # noqa: E402
from seqdiff.core.text.vocabulary import PAD_ID  # noqa: E402
from seqdiff.interfaces import IDenoiser  # noqa: E402


class ScInsensitiveDenoiser(IDenoiser):
    """
    Constructed denoiser that ignores its self-condition

    Predicts a fixed contraction of z_t and favors the source length in its
    length prior; every call is deterministic.
    """

    def __init__(self, vocab_size: int = 10, latent_dim: int = 4, max_length: int = 6):
        generator = torch.Generator().manual_seed(7)
        self._codebook = torch.randn(
            vocab_size, latent_dim, generator=generator, dtype=torch.float64
        )
        self._latent_dim = latent_dim
        self._max_length = max_length

    @property
    def codebook(self) -> torch.Tensor:
        return self._codebook

    @property
    def latent_dim(self) -> int:
        return self._latent_dim

    @property
    def max_length(self) -> int:
        return self._max_length

    def denoise(self, z_in, t, self_cond, src, tgt_mask=None):
        return 0.5 * z_in * (1.0 - t).unsqueeze(-1)

    def length_logits(self, src):
        lengths = (src != PAD_ID).sum(dim=1).clamp(max=self._max_length)
        logits = torch.zeros(src.shape[0], self._max_length, dtype=torch.float64)
        logits[torch.arange(src.shape[0]), lengths - 1] = 1.0
        return logits


class OracleDenoiser(ScInsensitiveDenoiser):
    """Returns a fixed clean latent regardless of its input"""

    def __init__(self, z0: torch.Tensor, codebook: Optional[torch.Tensor] = None):
        super().__init__(latent_dim=z0.shape[-1])
        self.z0 = z0
        if codebook is not None:
            self._codebook = codebook

    def denoise(self, z_in, t, self_cond, src, tgt_mask=None):
        return self.z0.clone()


@pytest.fixture
def tiny_denoiser_config():
    """A denoiser small enough for finite-difference checks"""
    return DenoiserConfig(
        vocab_size=10,
        max_length=6,
        latent_dim=4,
        d_model=8,
        heads=2,
        ffn_dim=16,
        enc_layers=1,
        dec_layers=1,
        dropout=0.0,
    )


@pytest.fixture
def tiny_model(tiny_denoiser_config):
    return build_denoiser(tiny_denoiser_config, seed=0)


@pytest.fixture
def sc_insensitive_model():
    return ScInsensitiveDenoiser()


@pytest.fixture
def copy_spec():
    return SynthTaskSpec(kind="copy", vocab_size=10, max_length=6, count=60, seed=3)


@pytest.fixture
def copy_dataset(copy_spec):
    return build_synthetic_dataset(copy_spec)


@pytest.fixture
def noise_schedule():
    return NoiseSchedule()


@pytest.fixture
def seeded_generator():
    return torch.Generator().manual_seed(1234)


@pytest.fixture
def tiny_run_config_dict(tmp_path):
    """Raw run configuration for a seconds-long training run"""
    return {
        "task": {"kind": "copy", "vocab_size": 10, "max_length": 5, "count": 80},
        "model": {
            "latent_dim": 4,
            "d_model": 8,
            "heads": 2,
            "ffn_dim": 16,
            "enc_layers": 1,
            "dec_layers": 1,
            "dropout": 0.1,
        },
        "schedules": {
            "mans": {"milestones": [2, 4], "scalings": [2.0, 3.0], "apply_prob": 1.0},
            "lr": {"lr_max": 0.001, "warmup": 2},
        },
        "training": {
            "batch_size": 4,
            "iterations": 6,
            "validation_interval": 3,
            "log_interval": 2,
            "checkpoint_interval": 3,
        },
        "generation": {"nfe": 3},
        "paths": {"run_dir": str(tmp_path / "run")},
    }


@pytest.fixture
def oracle_denoiser():
    """Factory for denoisers that always return the given clean latent"""
    return OracleDenoiser
