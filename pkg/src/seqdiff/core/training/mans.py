"""
Model-aware noise scaling
Tokens the denoiser already reconstructs correctly get a larger effective timestep
"""

import csv
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import torch

from seqdiff.core.diffusion import forward_sample
from seqdiff.core.errors import DomainError, ShapeMismatchError
from seqdiff.core.schedules import MansConfig, NoiseSchedule
from seqdiff.core.text.codebook import round_to_tokens
from seqdiff.interfaces.model import IDenoiser

logger = logging.getLogger(__name__)


@dataclass
class MansResult:
    """Outcome of one noise-scaling decision for a batch"""

    t_theta: torch.Tensor
    mask: torch.Tensor
    beta: float
    applied: bool

    def mask_fraction(self, valid: Optional[torch.Tensor] = None) -> float:
        """Share of (valid) positions whose timestep was rescaled"""
        if valid is None:
            valid = torch.ones_like(self.mask)
        total = int(valid.sum())
        if total == 0:
            return 0.0
        return int((self.mask & valid).sum()) / total


def confidence_mask(
    z0: torch.Tensor, z_hat: torch.Tensor, codebook: torch.Tensor
) -> torch.Tensor:
    """
    True where the estimate rounds to the same codebook row as the clean latent

    Args:
        z0: Clean latents (..., L, H)
        z_hat: Denoiser estimate (..., L, H)
        codebook: Embedding matrix (V, H)

    Returns:
        Boolean mask (..., L)
    """
    if z0.shape != z_hat.shape:
        raise ShapeMismatchError(
            f"z0 {tuple(z0.shape)} and estimate {tuple(z_hat.shape)} differ"
        )
    return round_to_tokens(z0, codebook) == round_to_tokens(z_hat, codebook)


def rescale_timesteps(
    t: torch.Tensor, mask: torch.Tensor, beta: float, t_ceiling: float
) -> torch.Tensor:
    """
    Masked entries become min(beta * t, t_ceiling); others are unchanged

    A masked time already above the ceiling keeps its value so that t_theta >= t.
    """
    if beta < 1.0:
        raise DomainError(f"scaling factor must be >= 1, got {beta}")
    if t.shape != mask.shape:
        raise ShapeMismatchError(
            f"time vector {tuple(t.shape)} and mask {tuple(mask.shape)} differ"
        )
    scaled = torch.clamp(beta * t, max=t_ceiling)
    return torch.where(mask, torch.maximum(scaled, t), t)


def apply_mans(
    model: IDenoiser,
    z0: torch.Tensor,
    t: torch.Tensor,
    src: torch.Tensor,
    cfg: MansConfig,
    n: int,
    sched: NoiseSchedule,
    generator: Optional[torch.Generator] = None,
    tgt_mask: Optional[torch.Tensor] = None,
) -> MansResult:
    """
    Decide per-token effective timesteps for one training batch

    With probability 1 - apply_prob (one draw per batch) t is returned
    unchanged and no confidence pass runs. Otherwise the model denoises a
    plain forward sample at t with zero self-condition, without gradients,
    and confident tokens are rescaled by beta(n). The pass runs in eval
    mode, so the mask does not depend on dropout.

    Args:
        model: Denoiser whose confidence is measured
        z0: Clean latents (B, L, H)
        t: Per-token times (B, L)
        src: Context ids (B, Ls)
        cfg: Noise-scaling configuration
        n: Training iteration selecting beta(n)
        sched: Noise schedule for the confidence-pass sample
        generator: Stream for the apply draw and the confidence-pass noise
        tgt_mask: Valid target positions (B, L); pad positions never rescale

    Returns:
        MansResult with t_theta, the confidence mask, beta and the applied flag
    """
    beta = cfg.beta(n)
    draw = torch.rand((), generator=generator, dtype=torch.float64)
    no_change = torch.zeros_like(t, dtype=torch.bool)
    if not bool(draw < cfg.apply_prob):
        return MansResult(t_theta=t, mask=no_change, beta=beta, applied=False)

    # Dropout off for the confidence pass; the caller's mode is restored
    was_training = isinstance(model, torch.nn.Module) and model.training
    if was_training:
        model.eval()
    try:
        with torch.no_grad():
            z0 = z0.detach()
            noise = torch.randn(z0.shape, generator=generator, dtype=z0.dtype)
            z_t = forward_sample(z0, t, noise, sched)
            z_hat = model.denoise(z_t, t, None, src, tgt_mask)
            mask = confidence_mask(z0, z_hat, model.codebook.detach())
    finally:
        if was_training:
            model.train()
    if tgt_mask is not None:
        mask = mask & tgt_mask
    t_theta = rescale_timesteps(t, mask, beta, cfg.t_ceiling)
    return MansResult(t_theta=t_theta, mask=mask, beta=beta, applied=True)


class ConfidenceTally:
    """Per-token counts of high- and low-confidence decisions over training"""

    def __init__(self, vocab_size: int):
        self.vocab_size = vocab_size
        self.high = torch.zeros(vocab_size, dtype=torch.int64)
        self.low = torch.zeros(vocab_size, dtype=torch.int64)

    def update(
        self, tokens: torch.Tensor, mask: torch.Tensor, valid: torch.Tensor
    ) -> None:
        """Count confident (mask) and non-confident positions among valid ones"""
        ids = tokens[valid]
        confident = mask[valid]
        self.high += torch.bincount(ids[confident], minlength=self.vocab_size)
        self.low += torch.bincount(ids[~confident], minlength=self.vocab_size)

    def rows(self, tokens: Sequence[str]) -> List[Dict[str, object]]:
        result = []
        for idx in range(self.vocab_size):
            high, low = int(self.high[idx]), int(self.low[idx])
            if high + low == 0:
                continue
            result.append(
                {
                    "token": tokens[idx] if idx < len(tokens) else str(idx),
                    "high": high,
                    "low": low,
                    "high_fraction": high / (high + low),
                }
            )
        return result

    def write_csv(self, path: str, tokens: Sequence[str]) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(
                handle, fieldnames=["token", "high", "low", "high_fraction"]
            )
            writer.writeheader()
            writer.writerows(self.rows(tokens))
        logger.info(f"Wrote confidence tally to {path}")
