"""
Embedding codebook operations
Lookup of token ids into the latent space and nearest-row rounding back to ids
"""

import math
from typing import Optional

import torch

from seqdiff.core.errors import DomainError, NumericError, ShapeMismatchError


def init_codebook(
    vocab_size: int, latent_dim: int, generator: Optional[torch.Generator] = None
) -> torch.Tensor:
    """I.i.d. Gaussian rows with standard deviation 1/sqrt(H)"""
    weight = torch.randn(
        vocab_size, latent_dim, generator=generator, dtype=torch.float64
    )
    return weight / math.sqrt(latent_dim)


def embed(x: torch.Tensor, codebook: torch.Tensor) -> torch.Tensor:
    """
    Map token ids to codebook rows

    Args:
        x: Integer ids of any shape (..., L)
        codebook: Matrix E of shape (V, H)

    Returns:
        Latents of shape (..., L, H) with row l equal to E[x_l]

    Raises:
        DomainError: If an id lies outside [0, V)
    """
    if x.numel() and (int(x.min()) < 0 or int(x.max()) >= codebook.shape[0]):
        raise DomainError(
            f"token ids must lie in [0, {codebook.shape[0]}), "
            f"got range [{int(x.min())}, {int(x.max())}]"
        )
    return torch.nn.functional.embedding(x, codebook)


def _squared_distances(z: torch.Tensor, codebook: torch.Tensor) -> torch.Tensor:
    if z.shape[-1] != codebook.shape[-1]:
        raise ShapeMismatchError(
            f"latent width {z.shape[-1]} does not match codebook width "
            f"{codebook.shape[-1]}"
        )
    if not bool(torch.isfinite(z).all()):
        raise NumericError("latents contain non-finite values")
    # Direct differences keep exact ties exact (no |z|^2 - 2ze + |e|^2 expansion)
    diff = z.unsqueeze(-2) - codebook
    return (diff * diff).sum(dim=-1)


def rounding_logits(z: torch.Tensor, codebook: torch.Tensor) -> torch.Tensor:
    """Scores -||z_l - e_m||^2 of shape (..., L, V); softmax gives p(x | z)"""
    return -_squared_distances(z, codebook)


def round_to_tokens(z: torch.Tensor, codebook: torch.Tensor) -> torch.Tensor:
    """
    Nearest codebook row per position, ties going to the lowest id

    Raises:
        NumericError: If z has non-finite entries
    """
    # argmax returns the first maximal index, which is the lowest id
    return torch.argmax(rounding_logits(z, codebook), dim=-1)
