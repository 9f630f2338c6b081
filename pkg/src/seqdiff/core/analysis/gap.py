"""
Self-conditioning estimation gap
How far the reused previous-step estimate moves the denoiser output away from
the output under a freshly computed same-step estimate
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
import torch

from seqdiff.core.data.corpus import ParallelDataset, ParallelExample
from seqdiff.core.errors import DomainError
from seqdiff.core.metrics import mean_sentence_bleu
from seqdiff.core.sampling import (
    GenerationConfig,
    generate_batch,
    inference_mode,
    mbr_decode,
)
from seqdiff.core.schedules import NoiseSchedule
from seqdiff.interfaces.model import IDenoiser

logger = logging.getLogger(__name__)

MIN_GAP_NFE = 3


def example_generator(seed: int, example: ParallelExample) -> torch.Generator:
    """Noise generator keyed by the example's content, not its position"""
    key = f"{seed}|{example.source}|{example.target}".encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return torch.Generator().manual_seed(
        int.from_bytes(digest, "little") & 0x7FFF_FFFF_FFFF_FFFF
    )


@dataclass
class GapReport:
    """
    Estimation gap of one NFE setting

    per_example holds the RMS gap of each example (rows) at each interior
    step (columns); per_step is its column mean and sup the largest of those.
    """

    nfe: int
    steps: List[int]
    times: List[float]
    per_example: np.ndarray = field(repr=False)

    @property
    def per_step(self) -> np.ndarray:
        return self.per_example.mean(axis=0)

    @property
    def sup(self) -> float:
        return float(self.per_step.max())

    def bootstrap_se(self, resamples: int = 200, seed: int = 0) -> float:
        """Bootstrap standard error of sup over example resamples"""
        rng = np.random.default_rng(seed)
        count = self.per_example.shape[0]
        sups = [
            self.per_example[rng.integers(0, count, size=count)].mean(axis=0).max()
            for _ in range(resamples)
        ]
        return float(np.std(sups, ddof=1))


def estimation_gap(
    model: IDenoiser,
    dataset: ParallelDataset,
    nfe: int,
    sched: NoiseSchedule,
    gcfg: GenerationConfig = GenerationConfig(),
    batch_size: int = 64,
) -> GapReport:
    """
    Measure ||D(z_t, reused) - D(z_t, matched)|| along reused-mode trajectories

    At every interior step (not the first, which has no previous estimate,
    and not the last) the output under the reused previous estimate is
    compared with the output under a fresh same-step estimate. Each
    example's gap is the root-mean-square over its valid entries.

    Raises:
        DomainError: If nfe < 3 (no interior step exists) or the dataset is empty
    """
    if nfe < MIN_GAP_NFE:
        raise DomainError(
            f"estimation gap needs nfe >= {MIN_GAP_NFE} so that an interior step "
            f"has both a reused and a step-matched estimate, got {nfe}"
        )
    if not len(dataset):
        raise DomainError("estimation gap needs a nonempty dataset")
    gcfg = gcfg.replace(nfe=nfe, sc_mode="reused")
    interior = list(range(1, nfe - 1))
    rows: List[np.ndarray] = []
    times: List[float] = []
    for start in range(0, len(dataset), batch_size):
        examples = dataset.examples[start : start + batch_size]
        batch = dataset.batch(range(start, start + len(examples)))
        lengths = [len(ex.target) for ex in examples]
        generators = [example_generator(gcfg.seed, ex) for ex in examples]
        _, trajectory = generate_batch(
            model, batch.src, lengths, gcfg, sched, generators
        )
        valid = trajectory.mask
        weights = valid.sum(dim=1).to(torch.float64) * model.latent_dim
        columns = []
        with inference_mode(model):
            for k in interior:
                step = trajectory.steps[k]
                tt = torch.full(valid.shape, step.t, dtype=torch.float64)
                matched = model.denoise(step.z_t, tt, None, batch.src, valid)
                corrected = model.denoise(step.z_t, tt, matched, batch.src, valid)
                diff = (step.z_hat - corrected) ** 2 * valid.unsqueeze(-1)
                columns.append(torch.sqrt(diff.sum(dim=(1, 2)) / weights).numpy())
        rows.append(np.stack(columns, axis=1))
        times = [trajectory.steps[k].t for k in interior]
    report = GapReport(
        nfe=nfe, steps=interior, times=times, per_example=np.concatenate(rows)
    )
    logger.info(f"Estimation gap at nfe={nfe}: sup={report.sup:.6f}")
    return report


@dataclass(frozen=True)
class ScBleuComparison:
    nfe: int
    bleu_original: float
    bleu_correct: float


def sc_bleu_compare(
    model: IDenoiser,
    dataset: ParallelDataset,
    nfe: int,
    sched: NoiseSchedule,
    gcfg: GenerationConfig = GenerationConfig(),
) -> ScBleuComparison:
    """Mean sentence BLEU of reused vs corrected self-conditioning, same seeds"""
    scores = {}
    refs = [list(ex.target) for ex in dataset]
    for mode in ("reused", "corrected"):
        cfg = gcfg.replace(nfe=nfe, sc_mode=mode)
        hyps = [mbr_decode(model, ex.source, cfg, sched) for ex in dataset]
        scores[mode] = mean_sentence_bleu(hyps, refs)
    comparison = ScBleuComparison(
        nfe=nfe, bleu_original=scores["reused"], bleu_correct=scores["corrected"]
    )
    logger.info(
        f"Self-conditioning BLEU at nfe={nfe}: reused={comparison.bleu_original:.4f} "
        f"corrected={comparison.bleu_correct:.4f}"
    )
    return comparison
