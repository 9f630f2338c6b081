"""
Residual analysis of reused self-conditioning estimates
Per-dimension OLS of the reused estimate on the step-matched one, the implied
perturbation strengths, and normality checks of the standardized residuals
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import statsmodels.api as sm
import torch

from seqdiff.core.data.corpus import ParallelDataset
from seqdiff.core.errors import (
    DegenerateDimensionError,
    DomainError,
    ShapeMismatchError,
)
from seqdiff.core.sampling import GenerationConfig, generate_batch, inference_mode
from seqdiff.core.schedules import NoiseSchedule
from seqdiff.interfaces.model import IDenoiser

from .gap import example_generator
from .normality import shapiro_wilk

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, torch.Tensor]

NORMALITY_SAMPLE_SIZE = 50
NORMALITY_ALPHA = 0.05


@dataclass
class ResidualStats:
    """Per-dimension slope mu, residual std sigma (population) and sample count"""

    mu: np.ndarray
    sigma: np.ndarray
    count: int
    residuals: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class StepPairs:
    """Flattened (reused, step-matched) estimates gathered at one sampling step"""

    step: int
    t: float
    reused: np.ndarray
    matched: np.ndarray


@dataclass(frozen=True)
class ScpAnchors:
    lambda_min: float
    lambda_max: float
    gamma_min: float
    gamma_max: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "gamma_min": self.gamma_min,
            "gamma_max": self.gamma_max,
        }


@dataclass
class NormalityReport:
    """Shapiro-Wilk results per dimension and the overall rejection rate"""

    statistics: np.ndarray
    pvalues: np.ndarray
    alpha: float = NORMALITY_ALPHA

    @property
    def rejection_rate(self) -> float:
        return float(np.mean(self.pvalues < self.alpha))


def _as_matrix(value: ArrayLike) -> np.ndarray:
    if isinstance(value, torch.Tensor):
        value = value.detach().cpu().numpy()
    array = np.asarray(value, dtype=np.float64)
    return array.reshape(-1, array.shape[-1])


def fit_residual_stats(pairs: Sequence[Tuple[ArrayLike, ArrayLike]]) -> ResidualStats:
    """
    Regress the reused estimate on the step-matched one, per dimension

    mu_i = sum(reused_i * matched_i) / sum(matched_i ** 2) (no intercept) and
    sigma_i is the residual standard deviation with denominator |D|.

    Args:
        pairs: (reused, matched) arrays of matching shape (..., H)

    Returns:
        ResidualStats including the residual matrix (N, H)

    Raises:
        DomainError: If fewer than two samples are available
        DegenerateDimensionError: If sum(matched_i ** 2) is zero in a dimension
    """
    if not pairs:
        raise DomainError("no residual pairs to fit")
    reused_parts, matched_parts = [], []
    for reused, matched in pairs:
        r, m = _as_matrix(reused), _as_matrix(matched)
        if r.shape != m.shape:
            raise ShapeMismatchError(
                f"reused {r.shape} and matched {m.shape} estimates differ"
            )
        reused_parts.append(r)
        matched_parts.append(m)
    y_all = np.concatenate(reused_parts)
    x_all = np.concatenate(matched_parts)
    count, dims = x_all.shape
    if count < 2:
        raise DomainError(f"need at least 2 samples per dimension, got {count}")

    mu = np.empty(dims)
    sigma = np.empty(dims)
    residuals = np.empty_like(y_all)
    for i in range(dims):
        x, y = x_all[:, i], y_all[:, i]
        if float(x @ x) == 0.0:
            raise DegenerateDimensionError(i)
        fit = sm.OLS(y, x).fit()
        mu[i] = fit.params[0]
        residuals[:, i] = fit.resid
        sigma[i] = np.sqrt(fit.ssr / count)
    return ResidualStats(mu=mu, sigma=sigma, count=count, residuals=residuals)


def empirical_lambda_gamma(
    stats: ResidualStats, s: float, sched: NoiseSchedule
) -> Tuple[np.ndarray, np.ndarray]:
    """
    lambda_hat = 1 / mu and gamma_hat = (alpha_s / sigma_s) * (sigma / mu)

    Raises:
        DomainError: If any mu is zero
    """
    zero = np.flatnonzero(stats.mu == 0.0)
    if zero.size:
        raise DomainError(f"slope is zero in dimension(s) {zero.tolist()}")
    alpha_s, sigma_s = sched.alpha_sigma(float(s))
    lam = 1.0 / stats.mu
    gam = (alpha_s / sigma_s) * (stats.sigma / stats.mu)
    return lam, gam


def standardized_residual_normality(
    stats: ResidualStats,
    sample_size: int = NORMALITY_SAMPLE_SIZE,
    seed: int = 0,
    alpha: float = NORMALITY_ALPHA,
) -> NormalityReport:
    """Shapiro-Wilk on a random draw of standardized residuals in each dimension"""
    if stats.residuals is None:
        raise DomainError("residual matrix was not kept with these statistics")
    rng = np.random.default_rng(seed)
    residuals = stats.residuals
    take = min(sample_size, residuals.shape[0])
    w_values, p_values = [], []
    for i in range(residuals.shape[1]):
        column = residuals[:, i]
        std = column.std()
        if std == 0.0:
            raise DomainError(f"residuals in dimension {i} have zero variance")
        standardized = (column - column.mean()) / std
        chosen = rng.choice(standardized, size=take, replace=False)
        result = shapiro_wilk(chosen)
        w_values.append(result.statistic)
        p_values.append(result.pvalue)
    return NormalityReport(np.array(w_values), np.array(p_values), alpha)


def collect_residual_pairs(
    model: IDenoiser,
    dataset: ParallelDataset,
    gcfg: GenerationConfig,
    sched: NoiseSchedule,
    batch_size: int = 64,
) -> List[StepPairs]:
    """
    Record (reused, step-matched) estimates at every step after the first

    Reused-mode trajectories run at the true target lengths; the matched
    estimate is a fresh denoise(z_t, t, zeros, c) at the same step.
    """
    gcfg = gcfg.replace(sc_mode="reused")
    reused_parts: Dict[int, List[np.ndarray]] = {}
    matched_parts: Dict[int, List[np.ndarray]] = {}
    times: Dict[int, float] = {}
    for start in range(0, len(dataset), batch_size):
        examples = dataset.examples[start : start + batch_size]
        batch = dataset.batch(range(start, start + len(examples)))
        lengths = [len(ex.target) for ex in examples]
        generators = [example_generator(gcfg.seed, ex) for ex in examples]
        _, trajectory = generate_batch(
            model, batch.src, lengths, gcfg, sched, generators
        )
        valid = trajectory.mask
        with inference_mode(model):
            for k, step in enumerate(trajectory.steps[1:], start=1):
                tt = torch.full(valid.shape, step.t, dtype=torch.float64)
                matched = model.denoise(step.z_t, tt, None, batch.src, valid)
                reused_parts.setdefault(k, []).append(step.self_cond[valid].numpy())
                matched_parts.setdefault(k, []).append(matched[valid].numpy())
                times[k] = step.t
    return [
        StepPairs(
            step=k,
            t=times[k],
            reused=np.concatenate(reused_parts[k]),
            matched=np.concatenate(matched_parts[k]),
        )
        for k in sorted(times)
    ]


def fit_scp_anchors(
    times: Sequence[float], lambdas: Sequence[float], gammas: Sequence[float]
) -> ScpAnchors:
    """Least-squares lines through per-step estimates, read off at t = 1 and t = 0"""
    if len(times) < 2 or not len(times) == len(lambdas) == len(gammas):
        raise DomainError("need at least two (t, lambda, gamma) points of equal count")
    lam_slope, lam_icpt = np.polyfit(times, lambdas, 1)
    gam_slope, gam_icpt = np.polyfit(times, gammas, 1)
    return ScpAnchors(
        lambda_min=float(lam_slope + lam_icpt),
        lambda_max=float(lam_icpt),
        gamma_min=float(gam_slope + gam_icpt),
        gamma_max=float(gam_icpt),
    )
