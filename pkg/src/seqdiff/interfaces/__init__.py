"""
Interface definitions for SeqDiff
All interfaces are defined here so samplers and analyses depend on contracts only
"""

from .schedules import INoiseSchedule, TimeLike
from .model import IDenoiser
from .metrics import ISequenceMetric

__all__ = [
    # Schedule interfaces
    "INoiseSchedule",
    "TimeLike",
    # Model interfaces
    "IDenoiser",
    # Metric interfaces
    "ISequenceMetric",
]
