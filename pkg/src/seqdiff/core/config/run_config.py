"""
Run configuration
Frozen dataclasses for every configuration block, the orchestrating validator
and the JSON loader
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from seqdiff.core.data.synthetic import SynthTaskSpec
from seqdiff.core.errors import ConfigurationError
from seqdiff.core.model.denoiser import DenoiserConfig
from seqdiff.core.sampling.sampler import GenerationConfig
from seqdiff.core.schedules import LrSchedule, MansConfig, NoiseSchedule, ScpSchedule
from seqdiff.core.training.trainer import TrainConfig
from seqdiff.core.utils.validation_helpers import ConfigWalker
from seqdiff.core.utils.validators import (
    ConfigConsistencyValidator,
    ConfigKeyValidator,
    ConfigRangeValidator,
    ConfigTypeValidator,
)

from .schema import CONFIG_SCHEMA, DEFAULT_RUN_DIR, TSV_TASK

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TaskConfig:
    """Which dataset to train on: a synthetic task or a TSV corpus"""

    kind: str = "copy"
    vocab_size: int = 16
    min_length: int = 1
    max_length: int = 12
    count: int = 2000
    seed: int = 0
    path: Optional[str] = None
    min_freq: int = 1
    tokenizer: str = "whitespace"
    max_source_length: Optional[int] = None

    @property
    def is_synthetic(self) -> bool:
        return self.kind != TSV_TASK

    def synth_spec(self) -> SynthTaskSpec:
        if not self.is_synthetic:
            raise ConfigurationError(f"Task kind '{self.kind}' is not synthetic")
        return SynthTaskSpec(
            kind=self.kind,
            vocab_size=self.vocab_size,
            min_length=self.min_length,
            max_length=self.max_length,
            count=self.count,
            seed=self.seed,
        )

    @property
    def source_length_limit(self) -> int:
        if self.is_synthetic:
            return self.synth_spec().source_length_limit
        return self.max_source_length or 2 * self.max_length


@dataclass(frozen=True)
class ModelConfig:
    """Architecture block; vocabulary and lengths come from the task"""

    latent_dim: int = 16
    d_model: int = 64
    heads: int = 2
    ffn_dim: int = 128
    enc_layers: int = 2
    dec_layers: int = 2
    dropout: float = 0.1

    def denoiser_config(
        self, vocab_size: int, max_length: int, max_source_length: Optional[int] = None
    ) -> DenoiserConfig:
        return DenoiserConfig(
            vocab_size=vocab_size,
            max_length=max_length,
            max_source_length=max_source_length,
            **asdict(self),
        )


@dataclass(frozen=True)
class SchedulesConfig:
    """
    Noise, perturbation, noise-scaling and learning-rate schedules

    scp_enabled=False replaces the anchors with the unperturbed forward
    process; a MANS preset overrides the explicit scaling table.
    """

    noise: NoiseSchedule = field(default_factory=NoiseSchedule)
    scp_anchors: ScpSchedule = field(default_factory=ScpSchedule)
    scp_enabled: bool = True
    mans: MansConfig = field(default_factory=MansConfig)
    mans_preset: Optional[str] = None
    lr: LrSchedule = field(default_factory=LrSchedule)

    @property
    def scp(self) -> ScpSchedule:
        return self.scp_anchors if self.scp_enabled else ScpSchedule.disabled()

    @classmethod
    def from_dict(cls, block: Dict[str, Any]) -> "SchedulesConfig":
        scp = dict(block["scp"])
        enabled = scp.pop("enabled")
        mans = dict(block["mans"])
        preset = mans.pop("preset")
        if preset is not None:
            mans_config = MansConfig.preset(
                preset, milestones=mans["milestones"], t_ceiling=mans["t_ceiling"]
            )
        else:
            mans_config = MansConfig(**mans)
        return cls(
            noise=NoiseSchedule(**block["noise"]),
            scp_anchors=ScpSchedule(**scp),
            scp_enabled=enabled,
            mans=mans_config,
            mans_preset=preset,
            lr=LrSchedule(**block["lr"]),
        )

    def to_dict(self) -> Dict[str, Any]:
        noise = {
            "kind": self.noise.kind,
            "shift": self.noise.shift,
            "t_floor": self.noise.t_floor,
        }
        mans = asdict(self.mans)
        mans["milestones"] = list(self.mans.milestones)
        mans["scalings"] = list(self.mans.scalings)
        return {
            "noise": noise,
            "scp": {"enabled": self.scp_enabled, **asdict(self.scp_anchors)},
            "mans": {"preset": self.mans_preset, **mans},
            "lr": asdict(self.lr),
        }


@dataclass(frozen=True)
class PathsConfig:
    run_dir: str = DEFAULT_RUN_DIR


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one run; embedded in every checkpoint"""

    task: TaskConfig = field(default_factory=TaskConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    schedules: SchedulesConfig = field(default_factory=SchedulesConfig)
    training: TrainConfig = field(default_factory=TrainConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "RunConfig":
        """
        Validate and build a run configuration

        Args:
            raw: Parsed JSON object; missing keys take their defaults

        Returns:
            RunConfig

        Raises:
            ConfigurationError: Listing every problem found
        """
        errors = RunConfigValidator().validate(raw)
        if errors:
            raise ConfigurationError("Invalid run configuration", errors)
        resolved = ConfigWalker.resolve(raw, CONFIG_SCHEMA)
        schedules = SchedulesConfig.from_dict(resolved["schedules"])
        training = TrainConfig(
            noise=schedules.noise,
            scp=schedules.scp,
            mans=schedules.mans,
            lr=schedules.lr,
            **resolved["training"],
        )
        return cls(
            task=TaskConfig(**resolved["task"]),
            model=ModelConfig(**resolved["model"]),
            schedules=schedules,
            training=training,
            generation=GenerationConfig(**resolved["generation"]),
            paths=PathsConfig(**resolved["paths"]),
        )

    def to_dict(self) -> Dict[str, Any]:
        training = {
            key: getattr(self.training, key) for key in CONFIG_SCHEMA["training"]
        }
        return {
            "task": asdict(self.task),
            "model": asdict(self.model),
            "schedules": self.schedules.to_dict(),
            "training": training,
            "generation": self.generation.to_dict(),
            "paths": asdict(self.paths),
        }

    def with_overrides(
        self,
        iterations: Optional[int] = None,
        seed: Optional[int] = None,
        run_dir: Optional[str] = None,
    ) -> "RunConfig":
        """Copy with command-line overrides applied; seed sets every seed"""
        raw = self.to_dict()
        if iterations is not None:
            raw["training"]["iterations"] = iterations
        if seed is not None:
            raw["training"]["seed"] = seed
            raw["generation"]["seed"] = seed
        if run_dir is not None:
            raw["paths"]["run_dir"] = run_dir
        return RunConfig.from_dict(raw)


class RunConfigValidator:
    """
    Orchestrates the configuration validators

    Key, type and range checks run on the raw dict; cross-field checks only
    run once those pass, on the defaults-resolved dict.
    """

    def __init__(self):
        self._key_validator = ConfigKeyValidator()
        self._type_validator = ConfigTypeValidator()
        self._range_validator = ConfigRangeValidator()
        self._consistency_validator = ConfigConsistencyValidator()

    def validate(self, raw: Any) -> List[str]:
        if not isinstance(raw, dict):
            return [
                "CONFIG_BLOCK_ERROR: the configuration must be a JSON object. "
                "Fix: wrap the blocks in {...}"
            ]
        errors = []
        errors.extend(self._key_validator.validate(raw, CONFIG_SCHEMA))
        errors.extend(self._type_validator.validate(raw, CONFIG_SCHEMA))
        errors.extend(self._range_validator.validate(raw, CONFIG_SCHEMA))
        if errors:
            return errors
        resolved = ConfigWalker.resolve(raw, CONFIG_SCHEMA)
        return self._consistency_validator.validate(resolved)


def load_run_config(path: str) -> RunConfig:
    """
    Load and validate a JSON run configuration

    Raises:
        ConfigurationError: If the file is missing, not JSON or invalid
    """
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigurationError(f"Configuration file not found: {path}")
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"Cannot read configuration file '{path}': {e}")
    except json.JSONDecodeError as e:
        raise ConfigurationError(
            f"Configuration file '{path}' is not valid JSON: {e.msg} "
            f"(line {e.lineno}, column {e.colno})"
        )
    try:
        config = RunConfig.from_dict(raw)
    except ConfigurationError as e:
        raise ConfigurationError(
            f"Invalid configuration '{path}'", e.errors or [str(e)]
        ) from e
    logger.info(f"Loaded run configuration from {path}")
    return config
