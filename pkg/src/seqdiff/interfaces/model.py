"""
Denoiser interface definitions for SeqDiff
"""

from abc import ABC, abstractmethod
from typing import Optional

import torch


class IDenoiser(ABC):
    """Abstract base class for z0-predicting denoisers D(z_t, t, sc, c)"""

    @property
    @abstractmethod
    def codebook(self) -> torch.Tensor:
        """Embedding codebook E of shape (V, H)"""
        pass

    @property
    @abstractmethod
    def latent_dim(self) -> int:
        """Latent width H"""
        pass

    @property
    @abstractmethod
    def max_length(self) -> int:
        """Largest target length the length head can propose"""
        pass

    @abstractmethod
    def denoise(
        self,
        z_in: torch.Tensor,
        t: torch.Tensor,
        self_cond: Optional[torch.Tensor],
        src: torch.Tensor,
        tgt_mask: Optional[torch.Tensor] = None,
    ) -> torch.Tensor:
        """
        Predict z0 from a noised latent

        Args:
            z_in: Latent batch of shape (B, L, H)
            t: Per-token diffusion times of shape (B, L)
            self_cond: Previous z0 estimate (B, L, H), or None for zeros
            src: Conditioning token ids (B, Ls), pad = 0
            tgt_mask: Valid target positions (B, L), or None for all valid

        Returns:
            Predicted z0 of shape (B, L, H)
        """
        pass

    @abstractmethod
    def length_logits(self, src: torch.Tensor) -> torch.Tensor:
        """Scores over target lengths 1..max_length, shape (B, max_length)"""
        pass
