"""
Shapiro-Wilk normality test
Royston's approximation: Blom-score coefficients and normalizing transforms of W
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import norm

from seqdiff.core.errors import DomainError

MIN_SAMPLES = 3
MAX_SAMPLES = 5000

# Polynomial coefficients, highest power first (numpy.polyval order)
_C1 = (-2.706056, 4.434685, -2.07119, -0.147981, 0.221157, 0.0)
_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)
_GAMMA = (0.459, -2.273)
_C3 = (-6.714e-4, 0.025054, -0.39978, 0.5440)
_C4 = (-0.0020322, 0.062767, -0.77857, 1.3822)
_C5 = (0.0038915, -0.083751, -0.31082, -1.5861)
_C6 = (0.0030302, -0.082676, -0.4803)


@dataclass(frozen=True)
class ShapiroResult:
    statistic: float
    pvalue: float


@lru_cache(maxsize=64)
def shapiro_coefficients(n: int) -> np.ndarray:
    """Antisymmetric weights a_1..a_n for sample size n (ascending order statistics)"""
    if n == 3:
        half = math.sqrt(0.5)
        weights = np.array([-half, 0.0, half])
        weights.setflags(write=False)
        return weights
    m = ndtri((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    msum = float(m @ m)
    u = 1.0 / math.sqrt(n)
    an = np.polyval(_C1, u) + m[-1] / math.sqrt(msum)
    if n > 5:
        an1 = np.polyval(_C2, u) + m[-2] / math.sqrt(msum)
        phi = (msum - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        weights = m / math.sqrt(phi)
        weights[-2], weights[1] = an1, -an1
    else:
        phi = (msum - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        weights = m / math.sqrt(phi)
    weights[-1], weights[0] = an, -an
    weights.setflags(write=False)
    return weights


def _pvalue(w: float, n: int) -> float:
    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.pi / 3.0)
        return min(max(p, 0.0), 1.0)
    y = math.log1p(-w) if w < 1.0 else -math.inf
    if n <= 11:
        gamma = np.polyval(_GAMMA, n)
        if y >= gamma:
            return 0.0
        y = -math.log(gamma - y)
        mean = np.polyval(_C3, n)
        std = math.exp(np.polyval(_C4, n))
    else:
        log_n = math.log(n)
        mean = np.polyval(_C5, log_n)
        std = math.exp(np.polyval(_C6, log_n))
    return float(norm.sf((y - mean) / std))


def shapiro_wilk(samples: Sequence[float]) -> ShapiroResult:
    """
    Shapiro-Wilk W statistic and p-value

    Args:
        samples: Between 3 and 5000 real values

    Returns:
        ShapiroResult with W in (0, 1] and p in [0, 1]

    Raises:
        DomainError: If the sample size is out of range or the variance is zero
    """
    x = np.sort(np.asarray(samples, dtype=np.float64).ravel())
    n = x.size
    if not MIN_SAMPLES <= n <= MAX_SAMPLES:
        raise DomainError(
            f"Shapiro-Wilk needs {MIN_SAMPLES} to {MAX_SAMPLES} samples, got {n}"
        )
    if not np.all(np.isfinite(x)):
        raise DomainError("samples contain non-finite values")
    centered = x - x.mean()
    ssq = float(centered @ centered)
    if ssq <= 0.0 or x[0] == x[-1]:
        raise DomainError("samples have zero variance")
    weights = shapiro_coefficients(n)
    w = float((weights @ x) ** 2 / ssq)
    w = min(w, 1.0)
    return ShapiroResult(statistic=w, pvalue=_pvalue(w, n))
