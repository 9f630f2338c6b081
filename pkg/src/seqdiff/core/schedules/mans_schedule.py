"""
Model-aware noise scaling configuration
Milestone table for the scaling factor beta(n) over training iterations
"""

import bisect
from dataclasses import dataclass, field
from typing import Sequence, Tuple

from seqdiff.core.errors import ConfigurationError, DomainError

MANS_PRESETS = ("fixed", "double", "linear")


@dataclass(frozen=True)
class MansConfig:
    """
    Step schedule beta(n) plus how often and how far timesteps are rescaled

    beta(n) = scalings[k] for the first milestone k exceeding n; past the
    last milestone the last scaling holds.
    """

    milestones: Tuple[int, ...] = (1000, 2000, 3000)
    scalings: Tuple[float, ...] = (2.0, 3.0, 4.0)
    apply_prob: float = 0.5
    t_ceiling: float = 1.0 - 1e-3

    def __post_init__(self):
        object.__setattr__(self, "milestones", tuple(int(m) for m in self.milestones))
        object.__setattr__(self, "scalings", tuple(float(b) for b in self.scalings))
        errors = []
        if len(self.milestones) != len(self.scalings):
            errors.append(
                f"milestones ({len(self.milestones)}) and scalings "
                f"({len(self.scalings)}) must have equal length"
            )
        if any(b <= a for a, b in zip(self.milestones, self.milestones[1:])):
            errors.append(f"milestones must be strictly ascending: {self.milestones}")
        if any(b < 1.0 for b in self.scalings):
            errors.append(f"scalings must all be >= 1: {self.scalings}")
        if not 0.0 <= self.apply_prob <= 1.0:
            errors.append(f"apply_prob must lie in [0, 1], got {self.apply_prob}")
        if not 0.0 < self.t_ceiling <= 1.0:
            errors.append(f"t_ceiling must lie in (0, 1], got {self.t_ceiling}")
        if errors:
            raise ConfigurationError("Invalid MANS configuration", errors)

    @classmethod
    def preset(
        cls,
        kind: str,
        milestones: Sequence[int] = (1000, 2000, 3000),
        t_ceiling: float = 1.0 - 1e-3,
    ) -> "MansConfig":
        """
        Build one of the named noise-scaling regimes

        Args:
            kind: 'fixed' (no rescaling), 'double' (constant beta = 2) or
                'linear' (beta = 2, 3, 4, ... stepping at the milestones)
            milestones: Phase boundaries for the linear regime
            t_ceiling: Largest rescaled time

        Returns:
            MansConfig for the requested regime
        """
        if kind == "fixed":
            return cls(
                milestones=(1,), scalings=(1.0,), apply_prob=0.0, t_ceiling=t_ceiling
            )
        if kind == "double":
            return cls(milestones=(1,), scalings=(2.0,), t_ceiling=t_ceiling)
        if kind == "linear":
            steps = tuple(2.0 + k for k in range(len(milestones)))
            return cls(
                milestones=tuple(milestones), scalings=steps, t_ceiling=t_ceiling
            )
        raise ConfigurationError(
            f"Unknown MANS preset '{kind}' (expected one of {', '.join(MANS_PRESETS)})"
        )

    def beta(self, n: int) -> float:
        """
        Scaling factor at training iteration n

        Raises:
            ConfigurationError: If the milestone table is empty
            DomainError: If n is negative
        """
        if not self.milestones:
            raise ConfigurationError("MANS configuration has no milestones")
        if n < 0:
            raise DomainError(f"iteration must be non-negative, got {n}")
        k = bisect.bisect_right(self.milestones, n)
        return self.scalings[min(k, len(self.scalings) - 1)]
