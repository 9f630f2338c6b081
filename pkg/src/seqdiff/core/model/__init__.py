"""
Denoising network: reference encoder-decoder transformer and length prior
"""

from .denoiser import DenoiserConfig, TransformerDenoiser, build_denoiser, TIME_SCALE
from .layers import timestep_embedding

__all__ = [
    "DenoiserConfig",
    "TransformerDenoiser",
    "build_denoiser",
    "TIME_SCALE",
    "timestep_embedding",
]
