"""
Tabulation of schedules for plotting
"""

from typing import Dict, List

import torch

from .noise_schedule import NoiseSchedule
from .scp_schedule import ScpSchedule


def schedule_table(
    noise: NoiseSchedule, scp: ScpSchedule, points: int = 101
) -> List[Dict[str, float]]:
    """
    Evaluate (t, alpha, sigma, lambda, gamma) on a uniform grid over [t_floor, 1]

    Args:
        noise: Noise schedule
        scp: Perturbation schedule
        points: Number of grid points (>= 2)

    Returns:
        One row per grid point
    """
    t = torch.linspace(noise.t_floor, 1.0, max(points, 2), dtype=torch.float64)
    t[-1] = 1.0
    alpha, sigma = noise.alpha_sigma(t)
    lam, gam = scp.lambda_gamma(t)
    return [
        {
            "t": float(t[i]),
            "alpha": float(alpha[i]),
            "sigma": float(sigma[i]),
            "lambda": float(lam[i]),
            "gamma": float(gam[i]),
        }
        for i in range(t.numel())
    ]
