"""
Minimum Bayes risk decoding
Candidates over length beam x noise beam, selected by mean pairwise BLEU
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import torch

from seqdiff.core.metrics import SentenceBleu
from seqdiff.core.errors import ShapeMismatchError
from seqdiff.core.schedules import NoiseSchedule
from seqdiff.interfaces.metrics import ISequenceMetric
from seqdiff.interfaces.model import IDenoiser

from .sampler import (
    GenerationConfig,
    Trajectory,
    generate_batch,
    inference_mode,
    top_lengths,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    tokens: Tuple[int, ...]
    length: int
    beam: int
    seed: int


@dataclass
class CandidateSet:
    """Hypotheses in deterministic order: length beam rank, then noise beam index"""

    candidates: List[Candidate] = field(default_factory=list)
    length_beam: int = 1
    noise_beam: int = 1

    def __post_init__(self):
        expected = self.length_beam * self.noise_beam
        if len(self.candidates) != expected:
            raise ShapeMismatchError(
                f"candidate set holds {len(self.candidates)} hypotheses, "
                f"expected {self.length_beam} x {self.noise_beam} = {expected}"
            )

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def sequences(self) -> List[Tuple[int, ...]]:
        return [c.tokens for c in self.candidates]


def derive_seed(master: int, rank: int, beam: int) -> int:
    """Reproducible, independent seed for the candidate at (length rank, beam)"""
    key = f"{master}:{rank}:{beam}".encode("ascii")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "little") & 0x7FFF_FFFF_FFFF_FFFF


def mbr_utilities(
    sequences: Sequence[Sequence[int]], metric: Optional[ISequenceMetric] = None
) -> List[float]:
    """Mean score of each candidate against every other candidate"""
    metric = metric or SentenceBleu()
    n = len(sequences)
    if n == 1:
        return [0.0]
    return [
        sum(metric.score(sequences[i], sequences[j]) for j in range(n) if j != i)
        / (n - 1)
        for i in range(n)
    ]


def select_mbr(
    sequences: Sequence[Sequence[int]], metric: Optional[ISequenceMetric] = None
) -> int:
    """Index of the highest-utility candidate; ties go to the earliest"""
    if not sequences:
        raise ShapeMismatchError("cannot select from an empty candidate list")
    utilities = mbr_utilities(sequences, metric)
    best = 0
    for i, value in enumerate(utilities):
        if value > utilities[best]:
            best = i
    return best


def generate_candidates(
    model: IDenoiser,
    src: Sequence[int],
    gcfg: GenerationConfig,
    sched: NoiseSchedule,
) -> Tuple[CandidateSet, Trajectory]:
    """
    Sample length_beam x noise_beam hypotheses for one context

    Lengths are the top length_beam entries of the length prior (capped at
    max_length, padded by repeating the last one); each (length, beam) pair
    is generated with a seed derived from gcfg.seed.
    """
    context = torch.tensor([list(src)], dtype=torch.int64)
    with inference_mode(model):
        lengths = top_lengths(model, context, gcfg.length_beam)[0].tolist()
    lengths += [lengths[-1]] * (gcfg.length_beam - len(lengths))

    plan = [
        (length, beam, derive_seed(gcfg.seed, rank, beam))
        for rank, length in enumerate(lengths)
        for beam in range(gcfg.noise_beam)
    ]
    generators = [torch.Generator().manual_seed(seed) for _, _, seed in plan]
    decoded, trajectory = generate_batch(
        model,
        context.expand(len(plan), -1),
        [length for length, _, _ in plan],
        gcfg,
        sched,
        generators,
    )
    candidates = [
        Candidate(tokens=tuple(tokens), length=length, beam=beam, seed=seed)
        for tokens, (length, beam, seed) in zip(decoded, plan)
    ]
    return (
        CandidateSet(candidates, gcfg.length_beam, gcfg.noise_beam),
        trajectory,
    )


def mbr_decode(
    model: IDenoiser,
    src: Sequence[int],
    gcfg: GenerationConfig,
    sched: NoiseSchedule,
    metric: Optional[ISequenceMetric] = None,
) -> List[int]:
    """Generate candidates for one context and return the MBR choice"""
    candidates, _ = generate_candidates(model, src, gcfg, sched)
    choice = select_mbr(candidates.sequences, metric)
    return list(candidates.candidates[choice].tokens)
