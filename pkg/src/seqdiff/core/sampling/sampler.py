"""
Reverse-process generation
Uniform time grids, the three self-conditioning modes and trajectory records
"""

import contextlib
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import torch
from torch import nn

from seqdiff.core.diffusion import reverse_step
from seqdiff.core.errors import ConfigurationError, DomainError, ShapeMismatchError
from seqdiff.core.schedules import NoiseSchedule
from seqdiff.core.text.codebook import round_to_tokens
from seqdiff.interfaces.model import IDenoiser

logger = logging.getLogger(__name__)

SC_MODES = ("none", "reused", "corrected")


@dataclass(frozen=True)
class GenerationConfig:
    """Sampling settings: step count, self-conditioning mode and beam sizes"""

    nfe: int = 5
    sc_mode: str = "reused"
    length_beam: int = 1
    noise_beam: int = 1
    seed: int = 0
    eps: float = 1e-3

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ConfigurationError("Invalid generation configuration", errors)

    def validate(self) -> List[str]:
        errors = []
        if not isinstance(self.nfe, int) or self.nfe < 1:
            errors.append(
                f"GEN_NFE_ERROR: nfe must be an integer >= 1, got {self.nfe!r}. "
                f"Fix: use at least one denoising step"
            )
        if self.sc_mode not in SC_MODES:
            errors.append(
                f"GEN_MODE_ERROR: unknown sc_mode '{self.sc_mode}'. "
                f"Fix: use one of {', '.join(SC_MODES)}"
            )
        for name in ("length_beam", "noise_beam"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                errors.append(
                    f"GEN_BEAM_ERROR: {name} must be an integer >= 1, got "
                    f"{value!r}. Fix: use 1 to disable the beam"
                )
        if not 0.0 <= self.eps < 1.0:
            errors.append(
                f"GEN_EPS_ERROR: eps must lie in [0, 1), got {self.eps}. "
                f"Fix: use the schedule's t_floor such as 1e-3"
            )
        return errors

    def check_schedule(self, sched: NoiseSchedule) -> None:
        """
        Raises:
            ConfigurationError: If eps lies below the schedule's t_floor
        """
        if self.eps < sched.t_floor:
            raise ConfigurationError(
                "Invalid generation configuration",
                [
                    f"GEN_EPS_ERROR: eps {self.eps} is below the noise schedule's "
                    f"t_floor {sched.t_floor}. Fix: use eps >= t_floor"
                ],
            )

    def replace(self, **changes: Any) -> "GenerationConfig":
        values = asdict(self)
        values.update(changes)
        return GenerationConfig(**values)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class TrajectoryStep:
    """One denoising step from time t to time s"""

    t: float
    s: float
    z_t: torch.Tensor
    self_cond: Optional[torch.Tensor]
    z_hat: torch.Tensor


@dataclass
class Trajectory:
    """Steps from t = 1 down to t = eps, plus the valid-position mask"""

    steps: List[TrajectoryStep] = field(default_factory=list)
    mask: Optional[torch.Tensor] = None

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def times(self) -> List[float]:
        return [step.t for step in self.steps]

    def records(self, codebook: torch.Tensor, row: int = 0) -> List[Dict[str, Any]]:
        """JSON-ready per-step view: times and the rounded prediction of one row"""
        length = self.steps[0].z_hat.shape[1] if self.steps else 0
        if self.mask is not None:
            length = int(self.mask[row].sum())
        return [
            {
                "step": i,
                "t": step.t,
                "s": step.s,
                "tokens": round_to_tokens(step.z_hat[row, :length], codebook).tolist(),
            }
            for i, step in enumerate(self.steps)
        ]


class DenoiserCallCounter(IDenoiser):
    """Delegating denoiser that counts denoise calls and rows processed"""

    def __init__(self, inner: IDenoiser):
        self.inner = inner
        self.calls = 0
        self.rows = 0

    @property
    def codebook(self) -> torch.Tensor:
        return self.inner.codebook

    @property
    def latent_dim(self) -> int:
        return self.inner.latent_dim

    @property
    def max_length(self) -> int:
        return self.inner.max_length

    def denoise(self, z_in, t, self_cond, src, tgt_mask=None):
        self.calls += 1
        self.rows += z_in.shape[0]
        return self.inner.denoise(z_in, t, self_cond, src, tgt_mask)

    def length_logits(self, src):
        return self.inner.length_logits(src)

    def reset(self) -> None:
        self.calls = 0
        self.rows = 0


@contextlib.contextmanager
def inference_mode(model: Any) -> Iterator[None]:
    """No gradients and, for torch modules, eval mode restored afterwards"""
    module = model
    while isinstance(module, DenoiserCallCounter):
        module = module.inner
    was_training = isinstance(module, nn.Module) and module.training
    if isinstance(module, nn.Module):
        module.eval()
    try:
        with torch.no_grad():
            yield
    finally:
        if was_training:
            module.train(True)


def time_grid(nfe: int, eps: float) -> List[float]:
    """nfe + 1 uniformly spaced times from 1 down to eps inclusive"""
    if nfe < 1:
        raise DomainError(f"nfe must be >= 1, got {nfe}")
    step = (1.0 - eps) / nfe
    return [1.0 - k * step for k in range(nfe)] + [eps]


def top_lengths(model: IDenoiser, src: torch.Tensor, k: int) -> torch.Tensor:
    """Top-k target lengths (B, k) from the length prior, most likely first"""
    if k < 1:
        raise DomainError(f"length beam must be >= 1, got {k}")
    k = min(k, model.max_length)
    order = torch.sort(
        model.length_logits(src), dim=-1, descending=True, stable=True
    )
    return order.indices[:, :k] + 1


def _row_noise(
    generators: Sequence[torch.Generator], lengths: Sequence[int], width: int, h: int
) -> torch.Tensor:
    rows = []
    for gen, length in zip(generators, lengths):
        row = torch.zeros(width, h, dtype=torch.float64)
        row[:length] = torch.randn(length, h, generator=gen, dtype=torch.float64)
        rows.append(row)
    return torch.stack(rows)


def generate_batch(
    model: IDenoiser,
    src: torch.Tensor,
    lengths: Sequence[int],
    gcfg: GenerationConfig,
    sched: NoiseSchedule,
    generators: Sequence[torch.Generator],
) -> Tuple[List[List[int]], Trajectory]:
    """
    Run the reverse process for a batch of contexts with given target lengths

    Each row draws its noise from its own generator, so a row's result does
    not depend on which other rows share the batch.

    Args:
        model: Denoiser
        src: Context ids (B, Ls)
        lengths: Target length per row, each in [1, max_length]
        gcfg: Sampling settings (nfe, sc_mode, eps)
        sched: Noise schedule
        generators: One noise generator per row

    Returns:
        (decoded ids per row, trajectory over the batch)

    Raises:
        DomainError: If a length lies outside [1, max_length]
        ConfigurationError: If gcfg.eps lies below the schedule's t_floor
    """
    gcfg.check_schedule(sched)
    lengths = [int(n) for n in lengths]
    if (
        src.dim() != 2
        or src.shape[0] != len(lengths)
        or len(lengths) != len(generators)
    ):
        raise ShapeMismatchError(
            f"need one length and generator per context row, got src "
            f"{tuple(src.shape)}, {len(lengths)} lengths, {len(generators)} generators"
        )
    for n in lengths:
        if not 1 <= n <= model.max_length:
            raise DomainError(
                f"target length {n} outside [1, {model.max_length}]"
            )
    batch, width, h = len(lengths), max(lengths), model.latent_dim
    mask = torch.arange(width).unsqueeze(0) < torch.tensor(lengths).unsqueeze(1)
    grid = time_grid(gcfg.nfe, gcfg.eps)
    trajectory = Trajectory(mask=mask)

    with inference_mode(model):
        z = _row_noise(generators, lengths, width, h)
        previous: Optional[torch.Tensor] = None
        for t, s in zip(grid[:-1], grid[1:]):
            tt = torch.full((batch, width), t, dtype=torch.float64)
            if gcfg.sc_mode == "none":
                cond = None
            elif gcfg.sc_mode == "reused":
                cond = previous
            else:
                cond = model.denoise(z, tt, None, src, mask)
            z_hat = model.denoise(z, tt, cond, src, mask)
            trajectory.steps.append(
                TrajectoryStep(t=t, s=s, z_t=z, self_cond=cond, z_hat=z_hat)
            )
            noise = _row_noise(generators, lengths, width, h)
            z = reverse_step(z, z_hat, s, t, noise, sched) * mask.unsqueeze(-1)
            previous = z_hat
        tokens = round_to_tokens(previous, model.codebook)
    decoded = [tokens[row, :n].tolist() for row, n in enumerate(lengths)]
    return decoded, trajectory


def generate(
    model: IDenoiser,
    src: Sequence[int],
    length: int,
    gcfg: GenerationConfig,
    sched: NoiseSchedule,
    generator: Optional[torch.Generator] = None,
) -> Tuple[List[int], Trajectory]:
    """Generate one target of the given length for one context"""
    if generator is None:
        generator = torch.Generator().manual_seed(gcfg.seed)
    context = torch.tensor([list(src)], dtype=torch.int64)
    decoded, trajectory = generate_batch(
        model, context, [length], gcfg, sched, [generator]
    )
    return decoded[0], trajectory
