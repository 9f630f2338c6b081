"""
Inverse-square-root learning-rate schedule with linear warmup
"""

import math
from dataclasses import dataclass

from seqdiff.core.errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class LrSchedule:
    """lr(n) = lr_max * min(n / warmup, sqrt(warmup / n))"""

    lr_max: float = 5e-4
    warmup: int = 500

    def __post_init__(self):
        if self.lr_max <= 0 or self.warmup < 1:
            raise ConfigurationError(
                "Invalid learning-rate schedule",
                [f"need lr_max > 0 and warmup >= 1, got {self.lr_max}, {self.warmup}"],
            )

    def learning_rate(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"learning rate is defined for n >= 1, got {n}")
        return self.lr_max * min(n / self.warmup, math.sqrt(self.warmup / n))
