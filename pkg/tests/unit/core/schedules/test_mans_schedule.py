"""
Unit tests for the noise-scaling milestone table
"""

import pytest

from seqdiff.core.errors import ConfigurationError, DomainError
from seqdiff.core.schedules import MansConfig


class TestMansBeta:
    """Test beta(n) lookups"""

    def _config(self):
        return MansConfig(
            milestones=(100_000, 200_000, 600_000), scalings=(2.0, 3.0, 4.0)
        )

    def test_first_phase(self):
        """Should use the first scaling before the first milestone"""
        assert self._config().beta(50_000) == 2.0

    def test_second_phase(self):
        """Should step up at the first milestone"""
        assert self._config().beta(100_000) == 3.0
        assert self._config().beta(150_000) == 3.0

    def test_saturation(self):
        """Should hold the last scaling beyond the last milestone"""
        assert self._config().beta(700_000) == 4.0

    def test_negative_iteration(self):
        """Should reject negative iterations"""
        with pytest.raises(DomainError):
            self._config().beta(-1)

    def test_empty_table(self):
        """Should report an empty milestone table as a configuration error"""
        with pytest.raises(ConfigurationError):
            MansConfig(milestones=(), scalings=()).beta(0)


class TestMansConfigValidation:
    """Test MansConfig construction checks"""

    def test_length_mismatch(self):
        """Should reject milestones and scalings of different lengths"""
        with pytest.raises(ConfigurationError, match="equal length"):
            MansConfig(milestones=(10, 20), scalings=(2.0,))

    def test_unsorted_milestones(self):
        """Should reject milestones that are not strictly ascending"""
        with pytest.raises(ConfigurationError, match="ascending"):
            MansConfig(milestones=(20, 10), scalings=(2.0, 3.0))

    def test_scaling_below_one(self):
        """Should reject a scaling below one"""
        with pytest.raises(ConfigurationError):
            MansConfig(milestones=(10,), scalings=(0.5,))


class TestMansPresets:
    """Test the named noise-scaling regimes"""

    def test_fixed(self):
        """Should never apply rescaling"""
        cfg = MansConfig.preset("fixed")

        assert cfg.apply_prob == 0.0
        assert cfg.beta(10_000) == 1.0

    def test_double(self):
        """Should use a constant factor of two"""
        cfg = MansConfig.preset("double")

        assert cfg.beta(0) == 2.0
        assert cfg.beta(1_000_000) == 2.0

    def test_linear(self):
        """Should step 2, 3, 4 at the milestones"""
        cfg = MansConfig.preset("linear", milestones=(10, 20, 30))

        assert [cfg.beta(n) for n in (0, 10, 25, 40)] == [2.0, 3.0, 4.0, 4.0]

    def test_unknown(self):
        """Should reject an unknown preset"""
        with pytest.raises(ConfigurationError, match="Unknown MANS preset"):
            MansConfig.preset("cubic")
