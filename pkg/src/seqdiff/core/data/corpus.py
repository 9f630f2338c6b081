"""
Parallel corpora
Example containers, deterministic splits, batching and TSV ingestion
"""

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import torch

from seqdiff.core.errors import CorpusFormatError, DomainError
from seqdiff.core.text.vocabulary import PAD_ID, Vocabulary, tokenize

logger = logging.getLogger(__name__)

SPLITS = ("train", "valid", "test")


@dataclass(frozen=True)
class ParallelExample:
    """A (context, target) pair of token id sequences"""

    source: Tuple[int, ...]
    target: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(i) for i in self.source))
        object.__setattr__(self, "target", tuple(int(i) for i in self.target))
        if not self.source or not self.target:
            raise DomainError("source and target sequences must be nonempty")


@dataclass
class Batch:
    """Padded id tensors for a group of examples"""

    src: torch.Tensor
    tgt: torch.Tensor

    @property
    def src_mask(self) -> torch.Tensor:
        return self.src != PAD_ID

    @property
    def tgt_mask(self) -> torch.Tensor:
        return self.tgt != PAD_ID

    @property
    def lengths(self) -> torch.Tensor:
        return self.tgt_mask.sum(dim=1)

    def __len__(self) -> int:
        return self.src.shape[0]


def pad_sequences(sequences: Sequence[Sequence[int]]) -> torch.Tensor:
    """Right-pad id sequences with pad = 0 into a (B, max_len) int64 tensor"""
    width = max((len(seq) for seq in sequences), default=0)
    out = torch.full((len(sequences), width), PAD_ID, dtype=torch.int64)
    for row, seq in enumerate(sequences):
        if seq:
            out[row, : len(seq)] = torch.tensor(list(seq), dtype=torch.int64)
    return out


def collate(examples: Sequence[ParallelExample]) -> Batch:
    return Batch(
        src=pad_sequences([ex.source for ex in examples]),
        tgt=pad_sequences([ex.target for ex in examples]),
    )


def split_of(index: int) -> str:
    """Deterministic 90/5/5 assignment of an example index to a split"""
    digest = hashlib.blake2b(str(index).encode("ascii"), digest_size=8).digest()
    bucket = int.from_bytes(digest, "little") % 100
    if bucket < 90:
        return "train"
    if bucket < 95:
        return "valid"
    return "test"


class ParallelDataset:
    """Indexed examples plus the vocabulary that encodes them"""

    def __init__(
        self,
        examples: Iterable[ParallelExample],
        vocab: Vocabulary,
        indices: Optional[Sequence[int]] = None,
    ):
        self.examples: List[ParallelExample] = list(examples)
        self.vocab = vocab
        # Original positions drive the split hash, so subsets keep them
        if indices is None:
            indices = range(len(self.examples))
        self.indices: List[int] = list(indices)

    def __len__(self) -> int:
        return len(self.examples)

    def __getitem__(self, item: int) -> ParallelExample:
        return self.examples[item]

    def __iter__(self):
        return iter(self.examples)

    def batch(self, positions: Sequence[int]) -> Batch:
        return collate([self.examples[int(p)] for p in positions])

    def batches(self, batch_size: int) -> Iterable[Batch]:
        """Consecutive batches in dataset order"""
        for start in range(0, len(self.examples), batch_size):
            yield collate(self.examples[start : start + batch_size])

    def split(self, name: str) -> "ParallelDataset":
        if name not in SPLITS:
            raise DomainError(f"unknown split '{name}' (expected one of {SPLITS})")
        chosen = [
            (idx, ex)
            for idx, ex in zip(self.indices, self.examples)
            if split_of(idx) == name
        ]
        return ParallelDataset(
            (ex for _, ex in chosen), self.vocab, [idx for idx, _ in chosen]
        )

    def subset(self, count: int) -> "ParallelDataset":
        return ParallelDataset(
            self.examples[:count], self.vocab, self.indices[:count]
        )

    @property
    def max_target_length(self) -> int:
        return max((len(ex.target) for ex in self.examples), default=0)

    @property
    def max_source_length(self) -> int:
        return max((len(ex.source) for ex in self.examples), default=0)


def read_tsv_pairs(path: str) -> List[Tuple[int, str, str]]:
    """
    Read 'source<TAB>target' lines

    Returns:
        (line number, source text, target text) per nonblank line

    Raises:
        CorpusFormatError: If the file has no examples or malformed lines
        OSError: If the file cannot be read
    """
    text = Path(path).read_text(encoding="utf-8")
    pairs = []
    errors = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            errors.append(
                f"line {number}: expected 'source<TAB>target', found "
                f"{len(fields)} field(s)"
            )
            continue
        source, target = fields
        if not source.strip() or not target.strip():
            errors.append(f"line {number}: empty source or target")
            continue
        pairs.append((number, source, target))
    if errors:
        raise CorpusFormatError(path, errors)
    if not pairs:
        raise CorpusFormatError(path, ["file contains no examples"])
    return pairs


def load_parallel_tsv(
    path: str,
    min_freq: int = 1,
    max_length: Optional[int] = None,
    max_source_length: Optional[int] = None,
    mode: str = "whitespace",
    vocab: Optional[Vocabulary] = None,
) -> Tuple[ParallelDataset, Vocabulary]:
    """
    Load a tab-separated parallel corpus

    The vocabulary is built from the training split only (unless one is
    given); out-of-vocabulary tokens map to unk. Lines whose target exceeds
    max_length (or source exceeds max_source_length) are skipped with a
    warning.

    Args:
        path: UTF-8 file with one 'source<TAB>target' pair per line
        min_freq: Minimum training-split count for a token to get an id
        max_length: Longest accepted target, or None for no limit
        max_source_length: Longest accepted source, or None for no limit
        mode: Tokenizer mode ('whitespace' or 'char')
        vocab: Existing vocabulary to encode with

    Returns:
        (dataset over all kept lines, vocabulary)
    """
    pairs = read_tsv_pairs(path)
    tokenized = []
    skipped = 0
    for number, source, target in pairs:
        src_tokens = tokenize(source, mode)
        tgt_tokens = tokenize(target, mode)
        if (max_length is not None and len(tgt_tokens) > max_length) or (
            max_source_length is not None and len(src_tokens) > max_source_length
        ):
            skipped += 1
            logger.warning(f"{path}:{number}: sequence longer than limit, skipped")
            continue
        tokenized.append((src_tokens, tgt_tokens))
    if not tokenized:
        raise CorpusFormatError(path, ["no line fits the configured length limits"])

    if vocab is None:
        train_tokens = []
        for idx, (src_tokens, tgt_tokens) in enumerate(tokenized):
            if split_of(idx) == "train":
                train_tokens.extend([src_tokens, tgt_tokens])
        vocab = Vocabulary.build(train_tokens, min_freq=min_freq)

    examples = [
        ParallelExample(vocab.encode(src_tokens), vocab.encode(tgt_tokens))
        for src_tokens, tgt_tokens in tokenized
    ]
    logger.info(
        f"Loaded {len(examples)} examples from {path} "
        f"({skipped} skipped, vocabulary size {vocab.size})"
    )
    return ParallelDataset(examples, vocab), vocab
