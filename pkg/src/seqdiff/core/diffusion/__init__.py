"""
Gaussian diffusion kernels: forward, perturbed forward, posterior and reverse step
"""

from .kernels import (
    PosteriorParams,
    forward_sample,
    scp_forward_sample,
    posterior_params,
    reverse_step,
)

__all__ = [
    "PosteriorParams",
    "forward_sample",
    "scp_forward_sample",
    "posterior_params",
    "reverse_step",
]
