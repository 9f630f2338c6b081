"""
Training objectives
Diffusion MSE, the z0 -> x rounding loss and the length-prior cross-entropy,
all averaged over valid (non-pad) positions
"""

from typing import Optional

import torch
import torch.nn.functional as F

from seqdiff.core.errors import DomainError, ShapeMismatchError
from seqdiff.core.text.codebook import rounding_logits


def _valid(mask: Optional[torch.Tensor], shape) -> torch.Tensor:
    if mask is None:
        return torch.ones(shape, dtype=torch.bool)
    if mask.shape != shape:
        raise ShapeMismatchError(
            f"mask shape {tuple(mask.shape)} does not match positions {tuple(shape)}"
        )
    return mask


def diffusion_loss(
    z_pred: torch.Tensor, z0: torch.Tensor, mask: Optional[torch.Tensor] = None
) -> torch.Tensor:
    """Mean squared difference over all H entries of every valid position"""
    if z_pred.shape != z0.shape:
        raise ShapeMismatchError(
            f"prediction {tuple(z_pred.shape)} and target {tuple(z0.shape)} differ"
        )
    valid = _valid(mask, z0.shape[:-1])
    sq = ((z_pred - z0) ** 2).sum(dim=-1)
    count = valid.sum() * z0.shape[-1]
    return (sq * valid).sum() / count


def rounding_loss(
    z0: torch.Tensor,
    x: torch.Tensor,
    codebook: torch.Tensor,
    mask: Optional[torch.Tensor] = None,
) -> torch.Tensor:
    """
    Mean cross-entropy of softmax(-||z0_l - e_m||^2) against the true ids

    Raises:
        DomainError: If an id lies outside [0, V)
        ShapeMismatchError: If latents and ids disagree
    """
    if z0.shape[:-1] != x.shape:
        raise ShapeMismatchError(
            f"latents {tuple(z0.shape)} do not match ids {tuple(x.shape)}"
        )
    vocab = codebook.shape[0]
    if x.numel() and (int(x.min()) < 0 or int(x.max()) >= vocab):
        raise DomainError(f"token ids must lie in [0, {vocab})")
    valid = _valid(mask, x.shape)
    logits = rounding_logits(z0, codebook)
    nll = F.cross_entropy(logits.reshape(-1, vocab), x.reshape(-1), reduction="none")
    return (nll * valid.reshape(-1)).sum() / valid.sum()


def length_loss(
    logits: torch.Tensor, lengths: torch.Tensor, label_smoothing: float = 0.0
) -> torch.Tensor:
    """Cross-entropy of the length prior; column k stands for length k + 1"""
    if int(lengths.min()) < 1 or int(lengths.max()) > logits.shape[-1]:
        raise DomainError(
            f"target lengths must lie in [1, {logits.shape[-1]}], got "
            f"[{int(lengths.min())}, {int(lengths.max())}]"
        )
    return F.cross_entropy(logits, lengths - 1, label_smoothing=label_smoothing)
