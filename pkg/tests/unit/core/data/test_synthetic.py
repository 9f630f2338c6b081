"""
Unit tests for synthetic sequence tasks
"""

import pytest

from seqdiff.core.data import (
    SYNTH_KINDS,
    SynthTaskSpec,
    build_synthetic_dataset,
    generate_synth,
    make_example,
)
from seqdiff.core.errors import ConfigurationError


class TestSynthTaskSpec:
    """Test SynthTaskSpec validation"""

    def test_unknown_kind(self):
        """Should reject unknown task kinds"""
        with pytest.raises(ConfigurationError, match="TASK_KIND_ERROR"):
            SynthTaskSpec(kind="shuffle")

    def test_small_vocabulary(self):
        """Should require at least two symbols"""
        with pytest.raises(ConfigurationError, match="TASK_VOCAB_ERROR"):
            SynthTaskSpec(vocab_size=5)

    def test_length_range(self):
        """Should reject min_length above max_length"""
        with pytest.raises(ConfigurationError, match="TASK_LENGTH_ERROR"):
            SynthTaskSpec(min_length=5, max_length=4)

    def test_add_mod_source_limit(self):
        """Should allow interleaved operands twice the target length"""
        assert SynthTaskSpec(kind="add-mod", max_length=5).source_length_limit == 10
        assert SynthTaskSpec(kind="copy", max_length=5).source_length_limit == 5


class TestTargets:
    """Test the task target rules"""

    def test_copy(self):
        """Should copy the source"""
        assert make_example("copy", [4, 7, 5], 10).target == (4, 7, 5)

    def test_reverse(self):
        """Should reverse the source"""
        assert make_example("reverse", [4, 7, 5], 10).target == (5, 7, 4)

    def test_sort(self):
        """Should sort the source ascending"""
        assert make_example("sort", [9, 4, 7, 4], 10).target == (4, 4, 7, 9)

    def test_add_mod(self):
        """Should add interleaved operands modulo the symbol count"""
        # base 6: symbols 4..9 stand for 0..5; (5 + 4) mod 6 = 3, (1 + 1) = 2
        example = make_example("add-mod", [9, 8, 5, 5], 10)

        assert example.target == (7, 6)


class TestGenerateSynth:
    """Test seeded generation"""

    @pytest.mark.parametrize("kind", SYNTH_KINDS)
    def test_reproducible(self, kind):
        """Should draw identical examples for identical specs"""
        spec = SynthTaskSpec(kind=kind, vocab_size=12, max_length=5, count=20, seed=4)

        assert generate_synth(spec) == generate_synth(spec)

    @pytest.mark.parametrize("kind", SYNTH_KINDS)
    def test_lengths_and_symbols(self, kind):
        """Should respect the length range and the symbol id range"""
        spec = SynthTaskSpec(
            kind=kind, vocab_size=12, min_length=2, max_length=5, count=50
        )

        for example in generate_synth(spec):
            assert 2 <= len(example.target) <= 5
            assert all(4 <= i < 12 for i in example.source + example.target)
            assert len(example.source) <= spec.source_length_limit

    def test_seed_matters(self):
        """Should draw different data for different seeds"""
        first = generate_synth(SynthTaskSpec(count=20, seed=1))
        second = generate_synth(SynthTaskSpec(count=20, seed=2))

        assert first != second

    def test_dataset_vocabulary(self, copy_spec):
        """Should attach a synthetic vocabulary of the task size"""
        dataset = build_synthetic_dataset(copy_spec)

        assert len(dataset) == copy_spec.count
        assert dataset.vocab.size == copy_spec.vocab_size
