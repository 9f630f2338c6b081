"""
Training loop
Self-conditioned diffusion training with perturbed forward samples and
model-aware noise scaling, plus validation, metrics and checkpointing
"""

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import torch

from seqdiff.core.data.checkpoint import CheckpointState, save_checkpoint
from seqdiff.core.data.corpus import Batch, ParallelDataset
from seqdiff.core.diffusion import forward_sample, scp_forward_sample
from seqdiff.core.errors import CheckpointError, ConfigurationError, DivergenceError
from seqdiff.core.model.denoiser import TransformerDenoiser
from seqdiff.core.sampling import GenerationConfig, inference_mode, mbr_decode
from seqdiff.core.schedules import LrSchedule, MansConfig, NoiseSchedule, ScpSchedule
from seqdiff.core.text.codebook import embed

from .losses import diffusion_loss, length_loss, rounding_loss
from .mans import ConfidenceTally, apply_mans

logger = logging.getLogger(__name__)

ADAM_BETAS = (0.9, 0.98)
ADAM_EPS = 1e-8
ROLE_STREAMS = ("time", "noise", "branch", "mans", "batch")
GLOBAL_STREAM = "global"
VALIDATION_SEED = 1234

CHECKPOINT_NAME = "checkpoint.bin"
METRICS_NAME = "metrics.jsonl"
TALLY_NAME = "confidence_tokens.csv"


@dataclass(frozen=True)
class TrainConfig:
    """Optimization settings and the schedules the training step consumes"""

    batch_size: int = 32
    iterations: int = 3000
    sc_prob: float = 0.5
    grad_clip: float = 1.0
    seed: int = 0
    validation_interval: int = 500
    log_interval: int = 100
    checkpoint_interval: int = 1000
    length_loss_weight: float = 0.1
    label_smoothing: float = 0.1
    noise: NoiseSchedule = field(default_factory=NoiseSchedule)
    scp: ScpSchedule = field(default_factory=ScpSchedule)
    mans: MansConfig = field(default_factory=MansConfig)
    lr: LrSchedule = field(default_factory=LrSchedule)

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ConfigurationError("Invalid training configuration", errors)

    def validate(self) -> List[str]:
        errors = []
        if not 0.0 <= self.sc_prob <= 1.0:
            errors.append(
                f"TRAIN_PROB_ERROR: sc_prob must lie in [0, 1], got {self.sc_prob}. "
                f"Fix: use 0.5 to alternate self-conditioning"
            )
        for name in ("batch_size", "validation_interval", "log_interval",
                     "checkpoint_interval"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                errors.append(
                    f"TRAIN_SIZE_ERROR: '{name}' must be a positive integer, got "
                    f"{value!r}. Fix: set a value >= 1"
                )
        if not isinstance(self.iterations, int) or self.iterations < 0:
            errors.append(
                f"TRAIN_SIZE_ERROR: 'iterations' must be >= 0, got "
                f"{self.iterations!r}. Fix: use 0 for a dry run"
            )
        if self.grad_clip <= 0:
            errors.append(
                f"TRAIN_CLIP_ERROR: grad_clip must be positive, got "
                f"{self.grad_clip}. Fix: use 1.0"
            )
        if self.length_loss_weight < 0 or not 0.0 <= self.label_smoothing < 1.0:
            errors.append(
                f"TRAIN_LENGTH_ERROR: need length_loss_weight >= 0 and "
                f"label_smoothing in [0, 1), got {self.length_loss_weight}, "
                f"{self.label_smoothing}. Fix: use 0.1 and 0.1"
            )
        return errors


@dataclass
class TrainMetrics:
    """One training iteration's losses and bookkeeping"""

    iteration: int
    l_diff: float
    l_round: float
    l_len: float
    l_total: float
    lr: float
    mans_frac: float
    mans_beta: float
    wall_ms: float

    def to_record(self) -> Dict[str, Any]:
        record = asdict(self)
        record["iter"] = record.pop("iteration")
        return record


@dataclass
class ValidationSummary:
    iteration: int
    loss: float
    accuracy: float
    examples: int


@dataclass
class TrainResult:
    model: TransformerDenoiser
    history: List[TrainMetrics] = field(default_factory=list)
    validations: List[ValidationSummary] = field(default_factory=list)

    @property
    def final_validation(self) -> Optional[ValidationSummary]:
        return self.validations[-1] if self.validations else None


class RngStreams:
    """
    Named, independently seeded generators, one per random role

    The torch global generator (used by dropout) is seeded alongside and is
    part of the saved state.
    """

    def __init__(self, seed: int):
        children = np.random.SeedSequence(seed).spawn(len(ROLE_STREAMS) + 1)
        seeds = [int(c.generate_state(1, dtype=np.uint64)[0] >> 1) for c in children]
        self._generators: Dict[str, torch.Generator] = {
            role: torch.Generator().manual_seed(s)
            for role, s in zip(ROLE_STREAMS, seeds)
        }
        torch.manual_seed(seeds[-1])

    def __getitem__(self, role: str) -> torch.Generator:
        return self._generators[role]

    def get_state(self) -> Dict[str, torch.Tensor]:
        states = {role: gen.get_state() for role, gen in self._generators.items()}
        states[GLOBAL_STREAM] = torch.get_rng_state()
        return states

    def set_state(self, states: Dict[str, torch.Tensor]) -> None:
        missing = [r for r in (*ROLE_STREAMS, GLOBAL_STREAM) if r not in states]
        if missing:
            raise CheckpointError(f"missing RNG stream state(s): {missing}")
        for role, gen in self._generators.items():
            gen.set_state(states[role])
        torch.set_rng_state(states[GLOBAL_STREAM])


def train_step(
    model: TransformerDenoiser,
    optimizer: torch.optim.Optimizer,
    batch: Batch,
    cfg: TrainConfig,
    n: int,
    rng: RngStreams,
    tally: Optional[ConfidenceTally] = None,
) -> TrainMetrics:
    """
    One optimizer update on a batch at iteration n (n >= 1)

    Raises:
        DivergenceError: If the loss or gradient norm is not finite
    """
    started = time.perf_counter()
    model.train()
    src, tgt, valid = batch.src, batch.tgt, batch.tgt_mask
    size, length = tgt.shape
    eps = cfg.noise.t_floor

    z0 = embed(tgt, model.codebook)
    u = torch.rand(size, generator=rng["time"], dtype=torch.float64)
    t = (eps + (1.0 - eps) * u).unsqueeze(1).expand(size, length).contiguous()

    mans = apply_mans(
        model, z0, t, src, cfg.mans, n, cfg.noise, rng["mans"], valid
    )
    if tally is not None and mans.applied:
        tally.update(tgt, mans.mask, valid)

    noise = torch.randn(z0.shape, generator=rng["noise"], dtype=torch.float64)
    z_t = scp_forward_sample(z0, mans.t_theta, noise, cfg.noise, cfg.scp)
    z_hat = model.denoise(z_t, mans.t_theta, None, src, valid)
    draw = torch.rand((), generator=rng["branch"], dtype=torch.float64)
    if bool(draw < cfg.sc_prob):
        z_out = model.denoise(z_t, mans.t_theta, z_hat.detach(), src, valid)
    else:
        z_out = z_hat

    l_diff = diffusion_loss(z_out, z0, valid)
    l_round = rounding_loss(z0, tgt, model.codebook, valid)
    l_len = length_loss(
        model.length_logits(src), batch.lengths, cfg.label_smoothing
    )
    l_total = l_diff + l_round
    objective = l_total + cfg.length_loss_weight * l_len
    if not bool(torch.isfinite(objective)):
        raise DivergenceError(
            n,
            f"non-finite loss (l_diff={float(l_diff)}, l_round={float(l_round)}, "
            f"l_len={float(l_len)})",
        )

    lr = cfg.lr.learning_rate(n)
    for group in optimizer.param_groups:
        group["lr"] = lr
    optimizer.zero_grad(set_to_none=True)
    objective.backward()
    grad_norm = torch.nn.utils.clip_grad_norm_(model.parameters(), cfg.grad_clip)
    if not bool(torch.isfinite(grad_norm)):
        raise DivergenceError(n, f"non-finite gradient norm {float(grad_norm)}")
    optimizer.step()

    return TrainMetrics(
        iteration=n,
        l_diff=float(l_diff),
        l_round=float(l_round),
        l_len=float(l_len),
        l_total=float(l_total),
        lr=lr,
        mans_frac=mans.mask_fraction(valid),
        mans_beta=mans.beta,
        wall_ms=(time.perf_counter() - started) * 1000.0,
    )


def validation_loss(
    model: TransformerDenoiser,
    dataset: ParallelDataset,
    sched: NoiseSchedule,
    batch_size: int = 64,
    seed: int = VALIDATION_SEED,
) -> float:
    """Diffusion loss of the plain (unperturbed, unconditioned) objective"""
    generator = torch.Generator().manual_seed(seed)
    eps = sched.t_floor
    total, weight = 0.0, 0
    with inference_mode(model):
        for batch in dataset.batches(batch_size):
            z0 = embed(batch.tgt, model.codebook)
            size, length = batch.tgt.shape
            u = torch.rand(size, generator=generator, dtype=torch.float64)
            t = (eps + (1.0 - eps) * u).unsqueeze(1).expand(size, length).contiguous()
            noise = torch.randn(z0.shape, generator=generator, dtype=torch.float64)
            z_t = forward_sample(z0, t, noise, sched)
            z_hat = model.denoise(z_t, t, None, batch.src, batch.tgt_mask)
            count = int(batch.tgt_mask.sum())
            total += float(diffusion_loss(z_hat, z0, batch.tgt_mask)) * count
            weight += count
    return total / weight if weight else 0.0


def sequence_accuracy(
    model: TransformerDenoiser,
    dataset: ParallelDataset,
    gcfg: GenerationConfig,
    sched: NoiseSchedule,
) -> float:
    """Share of examples whose MBR output equals the target exactly"""
    if not len(dataset):
        return 0.0
    hits = sum(
        tuple(mbr_decode(model, ex.source, gcfg, sched)) == ex.target
        for ex in dataset
    )
    return hits / len(dataset)


class Trainer:
    """
    Drives train_step over a dataset with logging, validation and checkpoints

    Batches are drawn with replacement from the 'batch' stream, so a run is
    fully described by (config, iteration, RNG states, parameters, optimizer).
    """

    def __init__(
        self,
        model: TransformerDenoiser,
        cfg: TrainConfig,
        train_data: ParallelDataset,
        val_data: Optional[ParallelDataset] = None,
        generation: Optional[GenerationConfig] = None,
        run_dir: Optional[str] = None,
        run_config: Optional[Dict[str, Any]] = None,
    ):
        if not len(train_data):
            raise ConfigurationError("Training dataset is empty")
        self.model = model
        self.cfg = cfg
        self.train_data = train_data
        self.val_data = val_data
        self.generation = generation or GenerationConfig(
            nfe=5, sc_mode="reused", seed=cfg.seed, eps=cfg.noise.t_floor
        )
        self.run_dir = Path(run_dir) if run_dir else None
        self.run_config = run_config or {}
        self.optimizer = torch.optim.Adam(
            model.parameters(),
            lr=cfg.lr.learning_rate(1),
            betas=ADAM_BETAS,
            eps=ADAM_EPS,
        )
        self.rng = RngStreams(cfg.seed)
        self.iteration = 0
        self.tally = ConfidenceTally(model.config.vocab_size)

    def sample_batch(self) -> Batch:
        positions = torch.randint(
            len(self.train_data), (self.cfg.batch_size,), generator=self.rng["batch"]
        )
        return self.train_data.batch(positions.tolist())

    def step(self) -> TrainMetrics:
        batch = self.sample_batch()
        metrics = train_step(
            self.model,
            self.optimizer,
            batch,
            self.cfg,
            self.iteration + 1,
            self.rng,
            self.tally,
        )
        self.iteration += 1
        return metrics

    def validate(self) -> Optional[ValidationSummary]:
        if self.val_data is None or not len(self.val_data):
            return None
        summary = ValidationSummary(
            iteration=self.iteration,
            loss=validation_loss(self.model, self.val_data, self.cfg.noise),
            accuracy=sequence_accuracy(
                self.model, self.val_data, self.generation, self.cfg.noise
            ),
            examples=len(self.val_data),
        )
        logger.info(
            f"Validation at iteration {summary.iteration}: loss={summary.loss:.5f} "
            f"accuracy={summary.accuracy:.4f} ({summary.examples} examples)"
        )
        return summary

    def run(self, iterations: Optional[int] = None) -> TrainResult:
        """Train until `iterations` (default cfg.iterations) have completed"""
        total = self.cfg.iterations if iterations is None else iterations
        result = TrainResult(model=self.model)
        if self.iteration >= total:
            return result

        metrics_file = None
        if self.run_dir is not None:
            self.run_dir.mkdir(parents=True, exist_ok=True)
            metrics_path = self.run_dir / METRICS_NAME
            # A run from iteration 0 starts a fresh log; a resumed one extends it
            mode = "a" if self.iteration > 0 else "w"
            try:
                metrics_file = open(metrics_path, mode, encoding="utf-8")
            except OSError as e:
                raise CheckpointError(
                    f"Cannot open metrics file '{metrics_path}': {e}"
                ) from e
        try:
            while self.iteration < total:
                metrics = self.step()
                result.history.append(metrics)
                if metrics_file is not None:
                    metrics_file.write(json.dumps(metrics.to_record()) + "\n")
                n = self.iteration
                if n % self.cfg.log_interval == 0 or n == total:
                    logger.info(
                        f"iter {n}: l_total={metrics.l_total:.5f} "
                        f"l_diff={metrics.l_diff:.5f} l_round={metrics.l_round:.5f} "
                        f"lr={metrics.lr:.2e} mans_frac={metrics.mans_frac:.3f} "
                        f"beta={metrics.mans_beta}"
                    )
                else:
                    logger.debug(f"iter {n}: l_total={metrics.l_total:.5f}")
                if n % self.cfg.validation_interval == 0 or n == total:
                    summary = self.validate()
                    if summary is not None:
                        result.validations.append(summary)
                if self.run_dir is not None and (
                    n % self.cfg.checkpoint_interval == 0 or n == total
                ):
                    self.save(str(self.run_dir / CHECKPOINT_NAME))
        finally:
            if metrics_file is not None:
                metrics_file.close()

        if self.run_dir is not None:
            self.tally.write_csv(
                str(self.run_dir / TALLY_NAME), self.train_data.vocab.all_tokens
            )
        return result

    def checkpoint_state(self) -> CheckpointState:
        arrays: Dict[str, np.ndarray] = {}
        for name, tensor in self.model.state_dict().items():
            arrays[f"model/{name}"] = tensor.detach().cpu().numpy()
        optim_state = self.optimizer.state_dict()
        for idx, slots in optim_state["state"].items():
            for key, value in slots.items():
                arrays[f"optim/{idx}/{key}"] = torch.as_tensor(value).cpu().numpy()
        for role, state in self.rng.get_state().items():
            arrays[f"rng/{role}"] = state.numpy()
        return CheckpointState(
            iteration=self.iteration,
            config=self.run_config,
            arrays=arrays,
            meta={
                "param_groups": optim_state["param_groups"],
                "vocab": self.train_data.vocab.tokens,
                "tally_high": self.tally.high.tolist(),
                "tally_low": self.tally.low.tolist(),
            },
        )

    def save(self, path: str) -> None:
        save_checkpoint(self.checkpoint_state(), path)

    def restore(self, state: CheckpointState) -> None:
        """Load parameters, optimizer moments, RNG streams and the iteration"""
        load_model_arrays(self.model, state)

        slots: Dict[int, Dict[str, torch.Tensor]] = {}
        for name, array in state.arrays.items():
            if name.startswith("optim/"):
                _, idx, key = name.split("/", 2)
                slots.setdefault(int(idx), {})[key] = torch.from_numpy(array)
        self.optimizer.load_state_dict(
            {"state": slots, "param_groups": state.meta["param_groups"]}
        )

        self.rng.set_state(
            {
                name[len("rng/"):]: torch.from_numpy(array)
                for name, array in state.arrays.items()
                if name.startswith("rng/")
            }
        )
        if "tally_high" in state.meta:
            self.tally.high = torch.tensor(state.meta["tally_high"], dtype=torch.int64)
            self.tally.low = torch.tensor(state.meta["tally_low"], dtype=torch.int64)
        self.iteration = state.iteration
        logger.info(f"Restored training state at iteration {self.iteration}")


def load_model_arrays(model: TransformerDenoiser, state: CheckpointState) -> None:
    """Copy the checkpoint's model/ arrays into model"""
    params = {
        name[len("model/"):]: torch.from_numpy(array)
        for name, array in state.arrays.items()
        if name.startswith("model/")
    }
    try:
        model.load_state_dict(params)
    except RuntimeError as e:
        raise CheckpointError(
            f"Checkpoint parameters do not fit the model: {e}"
        ) from e


def train_loop(
    model: TransformerDenoiser,
    cfg: TrainConfig,
    train_data: ParallelDataset,
    val_data: Optional[ParallelDataset] = None,
    generation: Optional[GenerationConfig] = None,
    run_dir: Optional[str] = None,
    run_config: Optional[Dict[str, Any]] = None,
) -> TrainResult:
    """Run cfg.iterations training steps; zero iterations returns the model untouched"""
    trainer = Trainer(
        model, cfg, train_data, val_data, generation, run_dir, run_config
    )
    return trainer.run()
