"""
Synthetic sequence-to-sequence tasks
Copy, reverse, sort and modular addition over symbol ids, seeded and reproducible
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

import numpy as np

from seqdiff.core.errors import ConfigurationError
from seqdiff.core.text.vocabulary import NUM_RESERVED, Vocabulary

from .corpus import ParallelDataset, ParallelExample

logger = logging.getLogger(__name__)

SYNTH_KINDS = ("copy", "reverse", "sort", "add-mod")


@dataclass(frozen=True)
class SynthTaskSpec:
    """
    Parameters of a synthetic task

    Symbols use ids [4, vocab_size). For add-mod, min/max length bound the
    operand length L; the source interleaves the operands (2L ids) and the
    target holds (a_l + b_l) mod (vocab_size - 4).
    """

    kind: str = "copy"
    vocab_size: int = 16
    min_length: int = 1
    max_length: int = 12
    count: int = 2000
    seed: int = 0

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ConfigurationError("Invalid synthetic task", errors)

    def validate(self) -> List[str]:
        errors = []
        if self.kind not in SYNTH_KINDS:
            errors.append(
                f"TASK_KIND_ERROR: unknown task '{self.kind}'. "
                f"Fix: use one of {', '.join(SYNTH_KINDS)}"
            )
        if self.vocab_size < NUM_RESERVED + 2:
            errors.append(
                f"TASK_VOCAB_ERROR: vocab_size {self.vocab_size} leaves fewer than "
                f"two symbols. Fix: use vocab_size >= {NUM_RESERVED + 2}"
            )
        if not 1 <= self.min_length <= self.max_length:
            errors.append(
                f"TASK_LENGTH_ERROR: length range [{self.min_length}, "
                f"{self.max_length}] is invalid. Fix: use 1 <= min_length <= max_length"
            )
        if self.count < 1:
            errors.append(
                f"TASK_COUNT_ERROR: count must be >= 1, got {self.count}. "
                f"Fix: request at least one example"
            )
        return errors

    @property
    def base(self) -> int:
        return self.vocab_size - NUM_RESERVED

    @property
    def source_length_limit(self) -> int:
        if self.kind == "add-mod":
            return 2 * self.max_length
        return self.max_length

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _target_for(kind: str, source: np.ndarray, base: int) -> np.ndarray:
    if kind == "copy":
        return source.copy()
    if kind == "reverse":
        return source[::-1].copy()
    if kind == "sort":
        return np.sort(source, kind="stable")
    a = source[0::2] - NUM_RESERVED
    b = source[1::2] - NUM_RESERVED
    return (a + b) % base + NUM_RESERVED


def make_example(kind: str, source, vocab_size: int) -> ParallelExample:
    """Build the target of one synthetic task from a given source"""
    src = np.asarray(list(source), dtype=np.int64)
    return ParallelExample(src, _target_for(kind, src, vocab_size - NUM_RESERVED))


def generate_synth(spec: SynthTaskSpec) -> List[ParallelExample]:
    """Draw spec.count examples; identical lists for identical specs"""
    rng = np.random.default_rng(spec.seed)
    examples = []
    for _ in range(spec.count):
        length = int(rng.integers(spec.min_length, spec.max_length + 1))
        width = 2 * length if spec.kind == "add-mod" else length
        source = rng.integers(NUM_RESERVED, spec.vocab_size, size=width)
        examples.append(
            ParallelExample(source, _target_for(spec.kind, source, spec.base))
        )
    return examples


def build_synthetic_dataset(spec: SynthTaskSpec) -> ParallelDataset:
    examples = generate_synth(spec)
    logger.info(
        f"Generated {len(examples)} '{spec.kind}' examples "
        f"(V={spec.vocab_size}, L in [{spec.min_length}, {spec.max_length}])"
    )
    return ParallelDataset(examples, Vocabulary.synthetic(spec.vocab_size))
