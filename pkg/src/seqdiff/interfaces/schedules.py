"""
Noise schedule interface definitions for SeqDiff
"""

from abc import ABC, abstractmethod
from typing import Tuple, Union

import torch

TimeLike = Union[float, torch.Tensor]


class INoiseSchedule(ABC):
    """Abstract base class for variance-preserving noise schedules"""

    @property
    @abstractmethod
    def t_floor(self) -> float:
        """Smallest diffusion time the schedule accepts"""
        pass

    @abstractmethod
    def alpha_bar(self, t: TimeLike) -> TimeLike:
        """Clamped cumulative signal power at time t"""
        pass

    @abstractmethod
    def alpha_sigma(self, t: TimeLike) -> Tuple[TimeLike, TimeLike]:
        """Signal and noise scales (alpha_t, sigma_t) at time t"""
        pass

    @abstractmethod
    def sigma_t_given_s(self, s: TimeLike, t: TimeLike) -> TimeLike:
        """Standard deviation of the transition q(z_t | z_s) for s < t"""
        pass
