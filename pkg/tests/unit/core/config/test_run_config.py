"""
Unit tests for run configuration loading
"""

import json
from pathlib import Path

import pytest

from seqdiff.core.config import (
    RunConfig,
    RunConfigValidator,
    SchedulesConfig,
    TaskConfig,
    load_run_config,
)
from seqdiff.core.errors import ConfigurationError
from seqdiff.core.schedules import ScpSchedule


class TestRunConfigFromDict:
    """Test RunConfig.from_dict"""

    def test_empty_uses_defaults(self):
        """Should build the default configuration from an empty object"""
        config = RunConfig.from_dict({})

        assert config.task.kind == "copy"
        assert config.generation.nfe == 5
        assert config.training.iterations == 3000
        assert config.schedules.noise.kind == "sqrt"

    def test_training_uses_schedule_objects(self, tiny_run_config_dict):
        """Should hand the configured schedules to the training settings"""
        config = RunConfig.from_dict(tiny_run_config_dict)

        assert config.training.mans.milestones == (2, 4)
        assert config.training.mans.apply_prob == 1.0
        assert config.training.lr.warmup == 2
        assert config.training.noise is config.schedules.noise

    def test_collects_all_errors(self):
        """Should list every invalid field at once"""
        with pytest.raises(ConfigurationError) as exc_info:
            RunConfig.from_dict(
                {"model": {"dropout": 2.0}, "training": {"batch_size": "x"}}
            )

        assert len(exc_info.value.errors) == 2

    def test_scp_disabled(self):
        """Should use the identity perturbation when SCP is disabled"""
        config = RunConfig.from_dict({"schedules": {"scp": {"enabled": False}}})

        assert config.schedules.scp.is_identity
        assert config.training.scp == ScpSchedule.disabled()

    def test_mans_preset(self):
        """Should resolve a named noise-scaling preset"""
        config = RunConfig.from_dict(
            {"schedules": {"mans": {"preset": "linear", "milestones": [10, 20]}}}
        )

        assert config.training.mans.scalings == (2.0, 3.0)
        assert config.schedules.mans_preset == "linear"

    def test_round_trip(self, tiny_run_config_dict):
        """Should rebuild an equal configuration from its dict form"""
        config = RunConfig.from_dict(tiny_run_config_dict)

        assert RunConfig.from_dict(config.to_dict()) == config

    def test_dict_is_json(self, tiny_run_config_dict):
        """Should serialize to plain JSON types"""
        config = RunConfig.from_dict(tiny_run_config_dict)

        assert json.loads(json.dumps(config.to_dict())) == config.to_dict()

    def test_overrides(self, tiny_run_config_dict):
        """Should apply iteration, seed and run directory overrides"""
        config = RunConfig.from_dict(tiny_run_config_dict).with_overrides(
            iterations=0, seed=9, run_dir="elsewhere"
        )

        assert config.training.iterations == 0
        assert config.training.seed == 9
        assert config.generation.seed == 9
        assert config.paths.run_dir == "elsewhere"

    def test_not_an_object(self):
        """Should reject a top-level list"""
        assert RunConfigValidator().validate([1]) != []


class TestTaskConfig:
    """Test TaskConfig helpers"""

    def test_synthetic_source_limit(self):
        """Should take the synthetic task's context limit"""
        assert TaskConfig(kind="add-mod", max_length=4).source_length_limit == 8

    def test_tsv_source_limit(self):
        """Should default TSV contexts to twice the target limit"""
        task = TaskConfig(kind="tsv", path="x.tsv", max_length=4)

        assert not task.is_synthetic
        assert task.source_length_limit == 8
        with pytest.raises(ConfigurationError):
            task.synth_spec()


class TestSchedulesConfig:
    """Test SchedulesConfig serialization"""

    def test_to_dict_keys(self):
        """Should emit every schedule block"""
        assert set(SchedulesConfig().to_dict()) == {"noise", "scp", "mans", "lr"}


class TestLoadRunConfig:
    """Test load_run_config"""

    def test_missing_file(self, tmp_path):
        """Should report a missing file"""
        with pytest.raises(ConfigurationError, match="not found"):
            load_run_config(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        """Should report the position of a JSON syntax error"""
        path = tmp_path / "bad.json"
        path.write_text('{"task": {\n  "kind": }\n}')

        with pytest.raises(ConfigurationError, match="line 2"):
            load_run_config(str(path))

    def test_invalid_values(self, tmp_path):
        """Should carry the validator messages"""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"generation": {"nfe": 0}}))

        with pytest.raises(ConfigurationError) as exc_info:
            load_run_config(str(path))

        assert exc_info.value.errors[0].startswith("CONFIG_RANGE_ERROR")

    def test_loads(self, tmp_path, tiny_run_config_dict):
        """Should load a valid file"""
        path = tmp_path / "run.json"
        path.write_text(json.dumps(tiny_run_config_dict))

        assert load_run_config(str(path)).task.count == 80

    @pytest.mark.parametrize(
        "name",
        ["copy_quickstart.json", "reverse_scp_mans.json", "reverse_uniform.json"],
    )
    def test_shipped_configs(self, name):
        """Should accept every configuration shipped with the project"""
        root = Path(__file__).resolve().parents[4]

        assert load_run_config(str(root / "configs" / name)).task.vocab_size == 16
