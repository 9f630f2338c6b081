"""
Unit tests for model-aware noise scaling
"""

import hashlib
from dataclasses import replace

import pytest
import torch

from seqdiff.core.errors import DomainError
from seqdiff.core.model import build_denoiser
from seqdiff.core.schedules import MansConfig, NoiseSchedule
from seqdiff.core.text import embed, init_codebook
from seqdiff.core.training import (
    ConfidenceTally,
    apply_mans,
    confidence_mask,
    rescale_timesteps,
)


def _parameter_digest(model):
    digest = hashlib.sha256()
    for name, param in model.named_parameters():
        digest.update(name.encode())
        digest.update(param.detach().numpy().tobytes())
    return digest.hexdigest()


class TestRescaleTimesteps:
    """Test rescale_timesteps"""

    def test_masked_only(self):
        """Should scale masked entries and leave the rest"""
        t = torch.tensor([[0.1, 0.2, 0.3]], dtype=torch.float64)
        mask = torch.tensor([[True, False, True]])

        out = rescale_timesteps(t, mask, 2.0, 0.999)

        assert out.tolist() == pytest.approx([[0.2, 0.2, 0.6]])

    def test_ceiling(self):
        """Should clip scaled times at the ceiling"""
        t = torch.tensor([0.6], dtype=torch.float64)

        assert float(rescale_timesteps(t, torch.tensor([True]), 3.0, 0.999)) == 0.999

    def test_never_lowers(self):
        """Should keep a masked time that already exceeds the ceiling"""
        t = torch.tensor([0.9995], dtype=torch.float64)

        out = rescale_timesteps(t, torch.tensor([True]), 2.0, 0.999)

        assert float(out) == pytest.approx(0.9995)

    def test_beta_below_one(self):
        """Should reject scaling factors below one"""
        with pytest.raises(DomainError):
            rescale_timesteps(torch.zeros(1), torch.tensor([True]), 0.5, 0.999)


class TestConfidenceMask:
    """Test confidence_mask"""

    def test_agreement(self):
        """Should flag positions whose estimate rounds to the clean token"""
        codebook = torch.eye(3, dtype=torch.float64)
        x = torch.tensor([[0, 1, 2]])
        z0 = embed(x, codebook)
        z_hat = z0.clone()
        z_hat[0, 1] = codebook[2]

        assert confidence_mask(z0, z_hat, codebook).tolist() == [[True, False, True]]


class TestApplyMans:
    """Test the per-batch noise-scaling decision"""

    def _setup(self, oracle_denoiser):
        codebook = init_codebook(10, 4, torch.Generator().manual_seed(0))
        x = torch.tensor([[4, 5, 6], [7, 8, 0]])
        z0 = embed(x, codebook)
        t = torch.full((2, 3), 0.2, dtype=torch.float64)
        src = torch.tensor([[4, 5, 6], [7, 8, 0]])
        return oracle_denoiser(z0, codebook), z0, t, src, x != 0

    def test_never_applied(self, oracle_denoiser):
        """Should return t unchanged when apply_prob is zero"""
        model, z0, t, src, valid = self._setup(oracle_denoiser)
        cfg = MansConfig.preset("fixed")

        result = apply_mans(model, z0, t, src, cfg, 10, NoiseSchedule())

        assert not result.applied
        assert torch.equal(result.t_theta, t)
        assert result.mask_fraction(valid) == 0.0

    def test_oracle_rescales_valid_positions(self, oracle_denoiser):
        """Should rescale every valid position of a perfect denoiser"""
        model, z0, t, src, valid = self._setup(oracle_denoiser)
        cfg = MansConfig(milestones=(5, 10), scalings=(2.0, 3.0), apply_prob=1.0)

        result = apply_mans(
            model, z0, t, src, cfg, 5, NoiseSchedule(), tgt_mask=valid
        )

        assert result.applied
        assert result.beta == 3.0
        assert torch.equal(result.mask, valid)
        assert result.t_theta[0].tolist() == pytest.approx([0.6, 0.6, 0.6])
        assert float(result.t_theta[1, 2]) == pytest.approx(0.2)
        assert result.mask_fraction(valid) == 1.0

    def test_beta_before_milestone(self, oracle_denoiser):
        """Should use the first scaling just before the first milestone"""
        model, z0, t, src, valid = self._setup(oracle_denoiser)
        cfg = MansConfig(milestones=(5, 10), scalings=(2.0, 3.0), apply_prob=1.0)

        result = apply_mans(model, z0, t, src, cfg, 4, NoiseSchedule())

        assert result.beta == 2.0

    def test_t_theta_dominates_t(self, oracle_denoiser):
        """Should never produce effective times below the drawn ones"""
        model, z0, _, src, valid = self._setup(oracle_denoiser)
        gen = torch.Generator().manual_seed(2)
        t = torch.rand(2, 3, generator=gen, dtype=torch.float64) * 0.99 + 0.001
        cfg = MansConfig(milestones=(1,), scalings=(4.0,), apply_prob=1.0)

        result = apply_mans(model, z0, t, src, cfg, 0, NoiseSchedule(), gen, valid)

        assert bool((result.t_theta >= t).all())
        assert float(result.t_theta.max()) <= 0.999

    def _model_inputs(self, model):
        x = torch.tensor([[4, 5, 6], [7, 8, 0]])
        z0 = embed(x, model.codebook.detach())
        t = torch.full((2, 3), 0.3, dtype=torch.float64)
        return z0, t, x.clone(), x != 0

    def test_parameters_untouched(self, tiny_model):
        """Should leave every parameter and its gradient unchanged"""
        z0, t, src, valid = self._model_inputs(tiny_model)
        cfg = MansConfig(milestones=(1,), scalings=(2.0,), apply_prob=1.0)
        before = _parameter_digest(tiny_model)

        result = apply_mans(
            tiny_model, z0, t, src, cfg, 1, NoiseSchedule(), tgt_mask=valid
        )

        assert result.applied
        assert _parameter_digest(tiny_model) == before
        assert all(p.grad is None for p in tiny_model.parameters())

    def test_mask_ignores_dropout(self, tiny_denoiser_config):
        """Should give the same mask for the same stream and keep train mode"""
        model = build_denoiser(replace(tiny_denoiser_config, dropout=0.5), seed=0)
        model.train()
        z0, t, src, valid = self._model_inputs(model)
        cfg = MansConfig(milestones=(1,), scalings=(2.0,), apply_prob=1.0)
        global_state = torch.get_rng_state()

        masks = [
            apply_mans(
                model, z0, t, src, cfg, 1, NoiseSchedule(),
                torch.Generator().manual_seed(5), valid,
            ).mask
            for _ in range(3)
        ]

        assert model.training
        assert all(torch.equal(masks[0], mask) for mask in masks[1:])
        assert torch.equal(torch.get_rng_state(), global_state)


class TestConfidenceTally:
    """Test ConfidenceTally"""

    def test_counts(self, tmp_path):
        """Should count confident and unconfident valid positions per token"""
        tally = ConfidenceTally(6)
        tokens = torch.tensor([[4, 4, 5, 0]])
        mask = torch.tensor([[True, False, True, True]])
        valid = torch.tensor([[True, True, True, False]])

        tally.update(tokens, mask, valid)
        rows = tally.rows(["<pad>", "<bos>", "<eos>", "<unk>", "a", "b"])

        assert rows == [
            {"token": "a", "high": 1, "low": 1, "high_fraction": 0.5},
            {"token": "b", "high": 1, "low": 0, "high_fraction": 1.0},
        ]
        path = tmp_path / "tally.csv"
        tally.write_csv(str(path), ["<pad>", "<bos>", "<eos>", "<unk>", "a", "b"])
        assert path.read_text().splitlines()[0] == "token,high,low,high_fraction"
