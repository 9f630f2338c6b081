"""
Variance-preserving noise schedules
Closed-form alpha_t / sigma_t for the sqrt, linear and cosine kinds plus the
transition scale sigma_{t|s} between two diffusion times
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import torch

from seqdiff.core.errors import (
    ConfigurationError,
    DomainError,
    OrderingError,
    ScheduleConsistencyError,
)
from seqdiff.interfaces import INoiseSchedule, TimeLike

SCHEDULE_KINDS = ("sqrt", "linear", "cosine")

DEFAULT_SHIFTS = {"sqrt": 1e-4, "linear": 0.0, "cosine": 8e-3}

# Continuous analog of the discrete linear beta schedule
LINEAR_BETA_MIN = 0.1
LINEAR_BETA_MAX = 20.0

# Negative transition variances smaller than this are rounding noise
RADICAND_TOLERANCE = 1e-12


def _as_tensor(value: TimeLike) -> Tuple[torch.Tensor, bool]:
    if isinstance(value, torch.Tensor):
        return value.to(torch.float64), False
    return torch.tensor(float(value), dtype=torch.float64), True


def _restore(value: torch.Tensor, scalar: bool) -> TimeLike:
    return float(value) if scalar else value


@dataclass(frozen=True)
class NoiseSchedule(INoiseSchedule):
    """
    Closed-form noise schedule over continuous time t in [t_floor, 1]

    The cumulative signal power alpha_bar is squashed affinely into
    [alpha_bar_min, alpha_bar_max] and then clipped, so alpha_bar stays
    strictly positive and below one without flattening the curve.
    """

    kind: str = "sqrt"
    shift: Optional[float] = None
    t_floor: float = 1e-3
    alpha_bar_min: float = 1e-5
    alpha_bar_max: float = 1.0 - 1e-5

    def __post_init__(self):
        errors = []
        if self.kind not in SCHEDULE_KINDS:
            errors.append(
                f"unknown schedule kind '{self.kind}' "
                f"(expected one of {', '.join(SCHEDULE_KINDS)})"
            )
        if self.shift is not None and self.shift < 0:
            errors.append(f"shift must be non-negative, got {self.shift}")
        if not 0.0 < self.t_floor < 1.0:
            errors.append(f"t_floor must lie in (0, 1), got {self.t_floor}")
        if not 0.0 < self.alpha_bar_min < self.alpha_bar_max < 1.0:
            errors.append(
                f"alpha_bar bounds must satisfy 0 < min < max < 1, got "
                f"[{self.alpha_bar_min}, {self.alpha_bar_max}]"
            )
        if errors:
            raise ConfigurationError("Invalid noise schedule", errors)

    @property
    def effective_shift(self) -> float:
        """Shift s actually used by the closed form"""
        if self.shift is not None:
            return self.shift
        return DEFAULT_SHIFTS[self.kind]

    def check_domain(self, t: torch.Tensor, name: str = "t") -> None:
        """Raise DomainError unless every entry of t lies in [t_floor, 1]"""
        if t.numel() == 0:
            return
        low = float(t.min())
        high = float(t.max())
        if math.isnan(low) or low < self.t_floor or high > 1.0:
            raise DomainError(
                f"{name} must lie in [{self.t_floor}, 1], got range [{low}, {high}]"
            )

    def raw_alpha_bar(self, t: TimeLike) -> TimeLike:
        """Unclamped alpha_bar(t); may leave (0, 1) near the endpoints"""
        tt, scalar = _as_tensor(t)
        s = self.effective_shift
        if self.kind == "sqrt":
            value = 1.0 - torch.sqrt(tt + s)
        elif self.kind == "linear":
            value = torch.exp(
                -LINEAR_BETA_MIN * tt
                - 0.5 * (LINEAR_BETA_MAX - LINEAR_BETA_MIN) * tt**2
            )
        else:
            angle = (tt + s) / (1.0 + s) * (math.pi / 2.0)
            origin = math.cos(s / (1.0 + s) * (math.pi / 2.0)) ** 2
            value = torch.cos(angle) ** 2 / origin
        return _restore(value, scalar)

    def alpha_bar(self, t: TimeLike) -> TimeLike:
        tt, scalar = _as_tensor(t)
        self.check_domain(tt)
        raw = self.raw_alpha_bar(tt)
        span = self.alpha_bar_max - self.alpha_bar_min
        value = torch.clamp(
            self.alpha_bar_min + span * raw, self.alpha_bar_min, self.alpha_bar_max
        )
        return _restore(value, scalar)

    def alpha_sigma(self, t: TimeLike) -> Tuple[TimeLike, TimeLike]:
        """
        Signal and noise scales at time t

        Args:
            t: Time in [t_floor, 1], scalar or tensor

        Returns:
            (alpha_t, sigma_t) with alpha_t**2 + sigma_t**2 == 1

        Raises:
            DomainError: If any t lies outside [t_floor, 1]
        """
        tt, scalar = _as_tensor(t)
        abar = self.alpha_bar(tt)
        return _restore(torch.sqrt(abar), scalar), _restore(
            torch.sqrt(1.0 - abar), scalar
        )

    def sigma_t_given_s(self, s: TimeLike, t: TimeLike) -> TimeLike:
        """
        Transition scale sigma_{t|s} = sqrt(sigma_t^2 - (alpha_t^2/alpha_s^2) sigma_s^2)

        Args:
            s: Earlier time(s)
            t: Later time(s), broadcastable against s

        Returns:
            Non-negative transition standard deviation

        Raises:
            OrderingError: If any s >= t
            ScheduleConsistencyError: If the radicand is below -1e-12
        """
        ss, s_scalar = _as_tensor(s)
        tt, t_scalar = _as_tensor(t)
        if bool((ss >= tt).any()):
            raise OrderingError("sigma_t_given_s requires s < t componentwise")
        abar_s = self.alpha_bar(ss)
        abar_t = self.alpha_bar(tt)
        # sigma_t^2 - (abar_t / abar_s)(1 - abar_s) simplifies to 1 - abar_t / abar_s
        radicand = 1.0 - abar_t / abar_s
        if bool((radicand < -RADICAND_TOLERANCE).any()):
            raise ScheduleConsistencyError(
                f"negative transition variance {float(radicand.min())} "
                f"for kind '{self.kind}'"
            )
        value = torch.sqrt(torch.clamp(radicand, min=0.0))
        return _restore(value, s_scalar and t_scalar)
