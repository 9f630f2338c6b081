"""
Reference encoder-decoder denoiser
A tiny transformer predicting z0 from (z_t, per-token t, self-condition, context),
plus the learned target-length prior p(L | c)
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import torch
from torch import nn

from seqdiff.core.errors import (
    ConfigurationError,
    DomainError,
    NumericError,
    ShapeMismatchError,
)
from seqdiff.core.text.vocabulary import PAD_ID
from seqdiff.interfaces.model import IDenoiser

from .layers import DecoderLayer, EncoderLayer, timestep_embedding

logger = logging.getLogger(__name__)

TIME_SCALE = 2000.0


@dataclass(frozen=True)
class DenoiserConfig:
    """Architecture hyperparameters of the reference denoiser"""

    vocab_size: int
    max_length: int
    latent_dim: int = 16
    d_model: int = 64
    heads: int = 2
    ffn_dim: int = 128
    enc_layers: int = 2
    dec_layers: int = 2
    dropout: float = 0.1
    max_source_length: Optional[int] = None
    time_scale: float = TIME_SCALE

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ConfigurationError("Invalid denoiser configuration", errors)

    def validate(self) -> List[str]:
        errors = []
        for name in ("vocab_size", "max_length", "latent_dim", "d_model", "heads",
                     "ffn_dim"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                errors.append(
                    f"MODEL_SIZE_ERROR: '{name}' must be a positive integer, "
                    f"got {value!r}. Fix: set a value >= 1"
                )
        for name in ("enc_layers", "dec_layers"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                errors.append(
                    f"MODEL_DEPTH_ERROR: '{name}' must be >= 1, got {value!r}. "
                    f"Fix: use at least one layer"
                )
        if (
            isinstance(self.d_model, int)
            and isinstance(self.heads, int)
            and self.heads > 0
            and self.d_model % self.heads
        ):
            errors.append(
                f"MODEL_HEADS_ERROR: d_model {self.d_model} is not divisible by "
                f"heads {self.heads}. Fix: pick heads dividing d_model"
            )
        if not 0.0 <= self.dropout < 1.0:
            errors.append(
                f"MODEL_DROPOUT_ERROR: dropout must lie in [0, 1), got "
                f"{self.dropout}. Fix: use a probability such as 0.1"
            )
        if self.max_source_length is not None and self.max_source_length < 1:
            errors.append(
                f"MODEL_SIZE_ERROR: 'max_source_length' must be >= 1, got "
                f"{self.max_source_length}. Fix: omit it to use 2 * max_length"
            )
        return errors

    @property
    def source_length_limit(self) -> int:
        if self.max_source_length is not None:
            return self.max_source_length
        return 2 * self.max_length

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class TransformerDenoiser(nn.Module, IDenoiser):
    """
    Encoder-decoder transformer D(z_t, t, sc, c) -> z0_hat

    The decoder attends bidirectionally over target positions and
    cross-attends to the encoded context. Self-conditioning enters by
    concatenation with z_t followed by a projection to the model width;
    per-token times enter as sinusoidal features of t * time_scale.
    """

    def __init__(
        self, config: DenoiserConfig, generator: Optional[torch.Generator] = None
    ):
        super().__init__()
        self.config = config
        d = config.d_model
        h = config.latent_dim

        self.embedding = nn.Embedding(config.vocab_size, h)
        self.src_embedding = nn.Embedding(config.vocab_size, d)
        self.src_positions = nn.Embedding(config.source_length_limit, d)
        self.tgt_positions = nn.Embedding(config.max_length, d)

        self.input_proj = nn.Linear(2 * h, d)
        self.time_mlp = nn.Sequential(nn.Linear(d, d), nn.SiLU(), nn.Linear(d, d))
        self.dropout = nn.Dropout(config.dropout)

        self.encoder = nn.ModuleList(
            EncoderLayer(d, config.heads, config.ffn_dim, config.dropout)
            for _ in range(config.enc_layers)
        )
        self.encoder_norm = nn.LayerNorm(d)
        self.decoder = nn.ModuleList(
            DecoderLayer(d, config.heads, config.ffn_dim, config.dropout)
            for _ in range(config.dec_layers)
        )
        self.decoder_norm = nn.LayerNorm(d)
        self.output_proj = nn.Linear(d, h)
        self.length_head = nn.Linear(d, config.max_length)

        self.double()
        self.reset_parameters(generator)

    # ------------------------------------------------------------------
    # IDenoiser properties
    # ------------------------------------------------------------------

    @property
    def codebook(self) -> torch.Tensor:
        return self.embedding.weight

    @property
    def latent_dim(self) -> int:
        return self.config.latent_dim

    @property
    def max_length(self) -> int:
        return self.config.max_length

    @property
    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    @torch.no_grad()
    def reset_parameters(self, generator: Optional[torch.Generator] = None) -> None:
        """Gaussian fan-in weights, zero biases, codebook rows with std 1/sqrt(H)"""

        def normal_(tensor: torch.Tensor, std: float) -> None:
            tensor.copy_(
                torch.randn(tensor.shape, generator=generator, dtype=tensor.dtype)
                * std
            )

        for module in self.modules():
            if isinstance(module, nn.Linear):
                normal_(module.weight, 1.0 / math.sqrt(module.in_features))
                if module.bias is not None:
                    module.bias.zero_()
            elif isinstance(module, nn.LayerNorm):
                module.weight.fill_(1.0)
                module.bias.zero_()
        normal_(self.embedding.weight, 1.0 / math.sqrt(self.config.latent_dim))
        for table in (self.src_embedding, self.src_positions, self.tgt_positions):
            normal_(table.weight, 1.0 / math.sqrt(self.config.d_model))

    def check_finite(self) -> None:
        """
        Raises:
            NumericError: If any parameter holds a non-finite value
        """
        for name, param in self.named_parameters():
            if not bool(torch.isfinite(param).all()):
                raise NumericError(f"parameter '{name}' has non-finite entries")

    # ------------------------------------------------------------------
    # Forward passes
    # ------------------------------------------------------------------

    def _check_source(self, src: torch.Tensor) -> torch.Tensor:
        if src.dim() != 2:
            raise ShapeMismatchError(
                f"context must be a (B, Ls) id batch, got shape {tuple(src.shape)}"
            )
        if src.shape[1] > self.config.source_length_limit:
            raise ShapeMismatchError(
                f"context length {src.shape[1]} exceeds the model limit "
                f"{self.config.source_length_limit}"
            )
        src_mask = src != PAD_ID
        if src.shape[1] == 0 or not bool(src_mask.any(dim=1).all()):
            raise DomainError("context sequence is empty")
        return src_mask

    def encode(self, src: torch.Tensor):
        """Encode context ids (B, Ls); returns (memory (B, Ls, d), mask (B, Ls))"""
        src_mask = self._check_source(src)
        positions = torch.arange(src.shape[1])
        x = self.src_embedding(src) + self.src_positions(positions)
        x = self.dropout(x)
        for layer in self.encoder:
            x = layer(x, src_mask)
        return self.encoder_norm(x), src_mask

    def denoise(
        self,
        z_in: torch.Tensor,
        t: torch.Tensor,
        self_cond: Optional[torch.Tensor],
        src: torch.Tensor,
        tgt_mask: Optional[torch.Tensor] = None,
    ) -> torch.Tensor:
        if z_in.dim() != 3 or z_in.shape[-1] != self.latent_dim:
            raise ShapeMismatchError(
                f"latents must be (B, L, {self.latent_dim}), got {tuple(z_in.shape)}"
            )
        batch, length, _ = z_in.shape
        if length > self.max_length:
            raise ShapeMismatchError(
                f"target length {length} exceeds max_length {self.max_length}"
            )
        if t.shape != (batch, length):
            raise ShapeMismatchError(
                f"time vector must be {(batch, length)}, got {tuple(t.shape)}"
            )
        if src.shape[0] != batch:
            raise ShapeMismatchError(
                f"context batch {src.shape[0]} does not match latent batch {batch}"
            )
        if self_cond is None:
            self_cond = torch.zeros_like(z_in)
        elif self_cond.shape != z_in.shape:
            raise ShapeMismatchError(
                f"self-condition shape {tuple(self_cond.shape)} does not match "
                f"latents {tuple(z_in.shape)}"
            )
        if tgt_mask is None:
            tgt_mask = torch.ones(batch, length, dtype=torch.bool)
        elif tgt_mask.shape != (batch, length):
            raise ShapeMismatchError(
                f"target mask must be {(batch, length)}, got {tuple(tgt_mask.shape)}"
            )
        self.check_finite()

        memory, src_mask = self.encode(src)
        time_features = timestep_embedding(
            t * self.config.time_scale, self.config.d_model
        )
        x = (
            self.input_proj(torch.cat([z_in, self_cond], dim=-1))
            + self.time_mlp(time_features)
            + self.tgt_positions(torch.arange(length))
        )
        x = self.dropout(x)
        for layer in self.decoder:
            x = layer(x, memory, tgt_mask, src_mask)
        return self.output_proj(self.decoder_norm(x))

    def length_logits(self, src: torch.Tensor) -> torch.Tensor:
        """Scores (B, max_length); column k stands for target length k + 1"""
        memory, src_mask = self.encode(src)
        weights = src_mask.to(memory.dtype).unsqueeze(-1)
        pooled = (memory * weights).sum(dim=1) / weights.sum(dim=1)
        return self.length_head(pooled)


def build_denoiser(
    config: DenoiserConfig, seed: int = 0
) -> TransformerDenoiser:
    """Construct a denoiser with a seeded initialization"""
    generator = torch.Generator().manual_seed(seed)
    model = TransformerDenoiser(config, generator)
    logger.info(
        f"Built denoiser with {model.parameter_count} parameters "
        f"(d={config.d_model}, H={config.latent_dim}, "
        f"layers={config.enc_layers}/{config.dec_layers})"
    )
    return model
