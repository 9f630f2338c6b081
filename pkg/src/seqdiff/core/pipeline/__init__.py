"""
Run sessions: configuration-driven training and checkpoint reloading
"""

from .session import (
    TrainedModel,
    TrainingSession,
    build_dataset,
    build_model,
    load_trained,
)

__all__ = [
    "TrainedModel",
    "TrainingSession",
    "build_dataset",
    "build_model",
    "load_trained",
]
