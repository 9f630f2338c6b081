"""
Training: objectives, model-aware noise scaling and the training loop
"""

from .losses import diffusion_loss, length_loss, rounding_loss
from .mans import (
    ConfidenceTally,
    MansResult,
    apply_mans,
    confidence_mask,
    rescale_timesteps,
)
from .trainer import (
    ADAM_BETAS,
    ADAM_EPS,
    CHECKPOINT_NAME,
    METRICS_NAME,
    ROLE_STREAMS,
    TALLY_NAME,
    RngStreams,
    TrainConfig,
    TrainMetrics,
    TrainResult,
    Trainer,
    ValidationSummary,
    load_model_arrays,
    sequence_accuracy,
    train_loop,
    train_step,
    validation_loss,
)

__all__ = [
    "diffusion_loss",
    "length_loss",
    "rounding_loss",
    "ConfidenceTally",
    "MansResult",
    "apply_mans",
    "confidence_mask",
    "rescale_timesteps",
    "ADAM_BETAS",
    "ADAM_EPS",
    "CHECKPOINT_NAME",
    "METRICS_NAME",
    "ROLE_STREAMS",
    "TALLY_NAME",
    "RngStreams",
    "TrainConfig",
    "TrainMetrics",
    "TrainResult",
    "Trainer",
    "ValidationSummary",
    "load_model_arrays",
    "sequence_accuracy",
    "train_loop",
    "train_step",
    "validation_loss",
]
