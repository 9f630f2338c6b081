"""
Gaussian diffusion kernels over embedding-space latents
Every kernel accepts per-token times: latents are (..., L, H), times (..., L)
or a plain float shared by all tokens. Noise is always drawn by the caller.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import torch

from seqdiff.core.errors import ShapeMismatchError
from seqdiff.core.schedules import NoiseSchedule, ScpSchedule

TimeArg = Union[float, torch.Tensor]


@dataclass
class PosteriorParams:
    """Mean (..., L, H) and per-token standard deviation (..., L) of q(z_s | z_t, z0)"""

    mean: torch.Tensor
    std: torch.Tensor


def _check_same_shape(a: torch.Tensor, b: torch.Tensor, what: str) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{what}: {tuple(a.shape)} vs {tuple(b.shape)}")


def _as_time(t: TimeArg, z: torch.Tensor) -> torch.Tensor:
    """Validate a time argument against latents and return it as a tensor"""
    if not isinstance(t, torch.Tensor):
        return torch.full(z.shape[:-1], float(t), dtype=torch.float64)
    if t.shape != z.shape[:-1]:
        raise ShapeMismatchError(
            f"time vector shape {tuple(t.shape)} does not match latent "
            f"positions {tuple(z.shape[:-1])}"
        )
    return t.to(torch.float64)


def _per_token(coeff: torch.Tensor) -> torch.Tensor:
    return coeff.unsqueeze(-1)


def forward_sample(
    z0: torch.Tensor, t: TimeArg, noise: torch.Tensor, sched: NoiseSchedule
) -> torch.Tensor:
    """
    Sample q(z_t | z0): row l is alpha(t_l) z0_l + sigma(t_l) noise_l

    Args:
        z0: Clean latents (..., L, H)
        t: Per-token times (..., L) or a shared float
        noise: Standard Gaussian draw shaped like z0
        sched: Noise schedule

    Returns:
        Noised latents shaped like z0

    Raises:
        ShapeMismatchError: If shapes disagree
        DomainError: If a time lies outside the schedule's domain
    """
    _check_same_shape(z0, noise, "z0 and noise shapes differ")
    tt = _as_time(t, z0)
    alpha, sigma = sched.alpha_sigma(tt)
    return _per_token(alpha) * z0 + _per_token(sigma) * noise


def scp_forward_sample(
    z0: torch.Tensor,
    t: TimeArg,
    noise: torch.Tensor,
    sched: NoiseSchedule,
    scp: ScpSchedule,
) -> torch.Tensor:
    """
    Perturbed forward sample alpha_t lambda_t z0 + sigma_t sqrt(1 + gamma_t^2) noise

    With lambda = 1 and gamma = 0 the result is bitwise equal to forward_sample.
    """
    _check_same_shape(z0, noise, "z0 and noise shapes differ")
    tt = _as_time(t, z0)
    alpha, sigma = sched.alpha_sigma(tt)
    lam, gam = scp.lambda_gamma(tt)
    signal = alpha * lam
    spread = sigma * torch.sqrt(1.0 + gam * gam)
    return _per_token(signal) * z0 + _per_token(spread) * noise


def _posterior_coefficients(
    s: torch.Tensor, t: torch.Tensor, sched: NoiseSchedule
) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    alpha_s, sigma_s = sched.alpha_sigma(s)
    alpha_t, sigma_t = sched.alpha_sigma(t)
    sigma_ts = sched.sigma_t_given_s(s, t)
    coeff_zt = (alpha_t / alpha_s) * (sigma_s**2 / sigma_t**2)
    coeff_z0 = alpha_s * (sigma_ts**2 / sigma_t**2)
    std = (sigma_s / sigma_t) * sigma_ts
    return coeff_zt, coeff_z0, std


def posterior_params(
    z_t: torch.Tensor,
    z0_hat: torch.Tensor,
    s: TimeArg,
    t: TimeArg,
    sched: NoiseSchedule,
) -> PosteriorParams:
    """
    Parameters of q(z_s | z_t, z0) with z0 replaced by its estimate

    mean = (alpha_t/alpha_s)(sigma_s^2/sigma_t^2) z_t
           + alpha_s (sigma_{t|s}^2/sigma_t^2) z0
    std  = (sigma_s/sigma_t) sigma_{t|s}

    Raises:
        OrderingError: If any s >= t
    """
    _check_same_shape(z_t, z0_hat, "z_t and z0_hat shapes differ")
    ss = _as_time(s, z_t)
    tt = _as_time(t, z_t)
    coeff_zt, coeff_z0, std = _posterior_coefficients(ss, tt, sched)
    mean = _per_token(coeff_zt) * z_t + _per_token(coeff_z0) * z0_hat
    return PosteriorParams(mean=mean, std=std)


def reverse_step(
    z_t: torch.Tensor,
    z0_hat: torch.Tensor,
    s: TimeArg,
    t: TimeArg,
    noise: torch.Tensor,
    sched: NoiseSchedule,
) -> torch.Tensor:
    """One ancestral step z_s = mean + std * noise of the estimated posterior"""
    _check_same_shape(z_t, noise, "z_t and noise shapes differ")
    post = posterior_params(z_t, z0_hat, s, t, sched)
    return post.mean + _per_token(post.std) * noise
