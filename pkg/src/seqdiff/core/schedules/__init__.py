"""
Time-indexed schedules: noise, self-conditioning perturbation, noise scaling
and learning rate
"""

from .noise_schedule import NoiseSchedule, SCHEDULE_KINDS
from .scp_schedule import ScpSchedule
from .mans_schedule import MansConfig, MANS_PRESETS
from .learning_rate import LrSchedule
from .table import schedule_table

__all__ = [
    "NoiseSchedule",
    "SCHEDULE_KINDS",
    "ScpSchedule",
    "MansConfig",
    "MANS_PRESETS",
    "LrSchedule",
    "schedule_table",
]
