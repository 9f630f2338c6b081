"""
Unit tests for residual fitting of reused self-conditioning estimates
"""

import numpy as np
import pytest
import torch

from seqdiff.core.analysis import (
    ResidualStats,
    collect_residual_pairs,
    empirical_lambda_gamma,
    fit_residual_stats,
    fit_scp_anchors,
    standardized_residual_normality,
)
from seqdiff.core.errors import DegenerateDimensionError, DomainError
from seqdiff.core.sampling import GenerationConfig
from seqdiff.core.schedules import NoiseSchedule


def _synthetic_pairs(count=20000, seed=0):
    rng = np.random.default_rng(seed)
    mu = np.array([0.9, 1.1, 1.0])
    sigma = np.array([0.1, 0.2, 0.3])
    matched = rng.normal(size=(count, 3))
    reused = matched * mu + rng.normal(size=(count, 3)) * sigma
    return reused, matched, mu, sigma


class TestFitResidualStats:
    """Test the per-dimension regression"""

    def test_recovers_slope_and_spread(self):
        """Should recover the generating slope and residual scale"""
        reused, matched, mu, sigma = _synthetic_pairs()

        fitted = fit_residual_stats([(reused, matched)])

        assert np.allclose(fitted.mu, mu, atol=0.01)
        assert np.allclose(fitted.sigma, sigma, rtol=0.03)
        assert fitted.count == 20000

    def test_closed_form(self):
        """Should equal sum(x y) / sum(x^2) without intercept"""
        x = np.array([[1.0], [2.0], [3.0]])
        y = np.array([[2.0], [3.0], [7.0]])

        fitted = fit_residual_stats([(y, x)])

        slope = (2 + 6 + 21) / 14
        assert fitted.mu[0] == pytest.approx(slope)
        resid = y[:, 0] - slope * x[:, 0]
        assert fitted.sigma[0] == pytest.approx(np.sqrt(np.mean(resid**2)))

    def test_concatenates_pairs(self):
        """Should pool several (reused, matched) chunks and accept tensors"""
        reused, matched, _, _ = _synthetic_pairs(count=100)
        split = [
            (torch.from_numpy(reused[:40]), torch.from_numpy(matched[:40])),
            (reused[40:], matched[40:]),
        ]

        assert fit_residual_stats(split).count == 100

    def test_degenerate_dimension(self):
        """Should report a dimension with zero regressor energy"""
        matched = np.zeros((5, 2))
        matched[:, 0] = 1.0

        with pytest.raises(DegenerateDimensionError) as exc_info:
            fit_residual_stats([(np.ones((5, 2)), matched)])

        assert exc_info.value.dimension == 1

    def test_too_few_samples(self):
        """Should require two samples"""
        with pytest.raises(DomainError):
            fit_residual_stats([(np.ones((1, 2)), np.ones((1, 2)))])


class TestEmpiricalLambdaGamma:
    """Test the implied perturbation strengths"""

    def test_formula(self):
        """Should invert the slope and scale the spread by alpha_s / sigma_s"""
        sched = NoiseSchedule()
        stats = ResidualStats(
            mu=np.array([0.8, 1.25]), sigma=np.array([0.1, 0.5]), count=10
        )
        alpha_s, sigma_s = sched.alpha_sigma(0.4)

        lam, gam = empirical_lambda_gamma(stats, 0.4, sched)

        assert lam.tolist() == pytest.approx([1.25, 0.8])
        assert gam.tolist() == pytest.approx(
            [alpha_s / sigma_s * 0.125, alpha_s / sigma_s * 0.4]
        )

    def test_zero_slope(self):
        """Should reject a zero slope"""
        stats = ResidualStats(mu=np.array([0.0]), sigma=np.array([1.0]), count=3)
        with pytest.raises(DomainError):
            empirical_lambda_gamma(stats, 0.5, NoiseSchedule())


class TestNormalityReport:
    """Test standardized-residual normality"""

    def test_gaussian_residuals_rarely_rejected(self):
        """Should rarely reject normality of Gaussian residuals"""
        rng = np.random.default_rng(3)
        matched = rng.normal(size=(5000, 20))
        reused = 0.9 * matched + 0.1 * rng.normal(size=(5000, 20))

        report = standardized_residual_normality(
            fit_residual_stats([(reused, matched)])
        )

        assert report.statistics.shape == (20,)
        assert report.rejection_rate <= 0.3

    def test_requires_residuals(self):
        """Should need the residual matrix"""
        stats = ResidualStats(mu=np.ones(1), sigma=np.ones(1), count=3)
        with pytest.raises(DomainError):
            standardized_residual_normality(stats)


class TestFitScpAnchors:
    """Test anchor fitting"""

    def test_exact_lines(self):
        """Should read the fitted lines off at t = 1 and t = 0"""
        times = [0.2, 0.5, 0.8]
        lambdas = [0.95 - 0.05 * t for t in times]
        gammas = [0.35 - 0.2 * t for t in times]

        anchors = fit_scp_anchors(times, lambdas, gammas)

        assert anchors.lambda_min == pytest.approx(0.90)
        assert anchors.lambda_max == pytest.approx(0.95)
        assert anchors.gamma_min == pytest.approx(0.15)
        assert anchors.gamma_max == pytest.approx(0.35)
        assert set(anchors.to_dict()) == {
            "lambda_min",
            "lambda_max",
            "gamma_min",
            "gamma_max",
        }

    def test_needs_two_points(self):
        """Should require at least two steps"""
        with pytest.raises(DomainError):
            fit_scp_anchors([0.5], [0.9], [0.2])


class TestCollectResidualPairs:
    """Test trajectory collection"""

    def test_pairs_per_step(self, sc_insensitive_model, copy_dataset):
        """Should gather one pair set per step after the first"""
        data = copy_dataset.subset(5)
        tokens = sum(len(ex.target) for ex in data)

        pairs = collect_residual_pairs(
            sc_insensitive_model, data, GenerationConfig(nfe=4), NoiseSchedule()
        )

        assert [p.step for p in pairs] == [1, 2, 3]
        assert pairs[0].reused.shape == (tokens, 4)
        assert pairs[0].matched.shape == (tokens, 4)
        assert pairs[0].t > pairs[-1].t
