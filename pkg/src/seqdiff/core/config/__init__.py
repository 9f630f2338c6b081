"""
Run configuration for SeqDiff
"""

from .schema import CONFIG_SCHEMA, TASK_KINDS, TSV_TASK
from .run_config import (
    TaskConfig,
    ModelConfig,
    SchedulesConfig,
    PathsConfig,
    RunConfig,
    RunConfigValidator,
    load_run_config,
)

__all__ = [
    "CONFIG_SCHEMA",
    "TASK_KINDS",
    "TSV_TASK",
    "TaskConfig",
    "ModelConfig",
    "SchedulesConfig",
    "PathsConfig",
    "RunConfig",
    "RunConfigValidator",
    "load_run_config",
]
