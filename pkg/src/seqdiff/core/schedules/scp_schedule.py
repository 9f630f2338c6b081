"""
Self-conditioning perturbation schedules
Linear lambda_t (signal shrink) and gamma_t (noise inflation) over t in [0, 1]
"""

from dataclasses import dataclass
from typing import Tuple

import torch

from seqdiff.core.errors import ConfigurationError, DomainError
from seqdiff.interfaces import TimeLike


@dataclass(frozen=True)
class ScpSchedule:
    """Anchors of the linear perturbation schedules"""

    lambda_min: float = 0.90
    lambda_max: float = 0.95
    gamma_min: float = 0.15
    gamma_max: float = 0.35

    def __post_init__(self):
        errors = []
        if not 0.0 < self.lambda_min <= self.lambda_max <= 1.0:
            errors.append(
                f"lambda anchors must satisfy 0 < min <= max <= 1, got "
                f"[{self.lambda_min}, {self.lambda_max}]"
            )
        if not 0.0 <= self.gamma_min <= self.gamma_max:
            errors.append(
                f"gamma anchors must satisfy 0 <= min <= max, got "
                f"[{self.gamma_min}, {self.gamma_max}]"
            )
        if errors:
            raise ConfigurationError("Invalid SCP schedule", errors)

    @classmethod
    def disabled(cls) -> "ScpSchedule":
        """lambda_t = 1 and gamma_t = 0: the unperturbed forward process"""
        return cls(lambda_min=1.0, lambda_max=1.0, gamma_min=0.0, gamma_max=0.0)

    @property
    def is_identity(self) -> bool:
        return (
            self.lambda_min == 1.0
            and self.lambda_max == 1.0
            and self.gamma_min == 0.0
            and self.gamma_max == 0.0
        )

    def lambda_gamma(self, t: TimeLike) -> Tuple[TimeLike, TimeLike]:
        """
        Evaluate (lambda_t, gamma_t) by linear interpolation

        lambda_t = (lambda_min - lambda_max) t + lambda_max, likewise for gamma.

        Raises:
            DomainError: If any t lies outside [0, 1]
        """
        if isinstance(t, torch.Tensor):
            if t.numel() and (float(t.min()) < 0.0 or float(t.max()) > 1.0):
                raise DomainError("SCP schedules are defined for t in [0, 1]")
        elif not 0.0 <= t <= 1.0:
            raise DomainError(f"SCP schedules are defined for t in [0, 1], got {t}")
        lam = (self.lambda_min - self.lambda_max) * t + self.lambda_max
        gam = (self.gamma_min - self.gamma_max) * t + self.gamma_max
        return lam, gam
