"""
SeqDiff Package
Few-step continuous diffusion for sequence-to-sequence generation
"""

__version__ = "1.0.0"
__author__ = "SeqDiff Team"

# Import main components for easy access
from .interfaces import *  # noqa: F403, F405
from .core.config import RunConfig, load_run_config
from .core.schedules import NoiseSchedule, ScpSchedule, MansConfig, LrSchedule
from .core.model import DenoiserConfig, TransformerDenoiser, build_denoiser

__all__ = [
    # Core interfaces
    "INoiseSchedule",  # noqa: F405
    "IDenoiser",  # noqa: F405
    "ISequenceMetric",  # noqa: F405
    # Configuration
    "RunConfig",
    "load_run_config",
    # Schedules
    "NoiseSchedule",
    "ScpSchedule",
    "MansConfig",
    "LrSchedule",
    # Model
    "DenoiserConfig",
    "TransformerDenoiser",
    "build_denoiser",
]
