"""
BLEU metrics
Smoothed sentence-level BLEU over token sequences and corpus BLEU via sacrebleu
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, List, Sequence, Tuple

from sacrebleu.metrics import BLEU

from seqdiff.core.errors import DomainError
from seqdiff.interfaces.metrics import ISequenceMetric


@dataclass(frozen=True)
class BleuConfig:
    """Maximum n-gram order and whether the brevity penalty applies"""

    max_order: int = 4
    brevity_penalty: bool = True

    def __post_init__(self):
        if self.max_order < 1:
            raise DomainError(f"max n-gram order must be >= 1, got {self.max_order}")


def _ngrams(tokens: Sequence[Hashable], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def ngram_precisions(
    hyp: Sequence[Hashable], ref: Sequence[Hashable], max_order: int
) -> List[Tuple[int, int]]:
    """Clipped (matches, candidate count) per order 1..max_order"""
    stats = []
    for n in range(1, max_order + 1):
        hyp_counts = _ngrams(hyp, n)
        ref_counts = _ngrams(ref, n)
        matches = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
        stats.append((matches, max(len(hyp) - n + 1, 0)))
    return stats


def sentence_bleu(
    hyp: Sequence[Hashable],
    ref: Sequence[Hashable],
    cfg: BleuConfig = BleuConfig(),
) -> float:
    """
    Sentence BLEU in [0, 1]

    Orders with zero matches use the add-one precision 1 / (count + 1);
    the brevity penalty is exp(min(0, 1 - |ref| / |hyp|)).

    Raises:
        DomainError: If the reference is empty
    """
    if not ref:
        raise DomainError("reference must be nonempty")
    if not hyp:
        return 0.0
    log_sum = 0.0
    for matches, count in ngram_precisions(hyp, ref, cfg.max_order):
        precision = matches / count if matches > 0 else 1.0 / (count + 1)
        log_sum += math.log(precision)
    score = math.exp(log_sum / cfg.max_order)
    if cfg.brevity_penalty:
        score *= math.exp(min(0.0, 1.0 - len(ref) / len(hyp)))
    return score


class SentenceBleu(ISequenceMetric):
    """ISequenceMetric wrapper around sentence_bleu"""

    def __init__(self, cfg: BleuConfig = BleuConfig()):
        self.cfg = cfg

    @property
    def name(self) -> str:
        return "sentence_bleu"

    def score(self, hyp: Sequence[Hashable], ref: Sequence[Hashable]) -> float:
        return sentence_bleu(hyp, ref, self.cfg)


def _as_text(tokens: Sequence[Hashable]) -> str:
    return " ".join(str(tok) for tok in tokens)


def corpus_bleu(
    hyps: Sequence[Sequence[Hashable]], refs: Sequence[Sequence[Hashable]]
) -> float:
    """Corpus BLEU in [0, 1] computed by sacrebleu on pre-tokenized sequences"""
    if len(hyps) != len(refs):
        raise DomainError(
            f"{len(hyps)} hypotheses but {len(refs)} references"
        )
    if not hyps:
        return 0.0
    metric = BLEU(tokenize="none", force=True)
    result = metric.corpus_score(
        [_as_text(h) for h in hyps], [[_as_text(r) for r in refs]]
    )
    return result.score / 100.0


def mean_sentence_bleu(
    hyps: Sequence[Sequence[Hashable]],
    refs: Sequence[Sequence[Hashable]],
    cfg: BleuConfig = BleuConfig(),
) -> float:
    if len(hyps) != len(refs):
        raise DomainError(f"{len(hyps)} hypotheses but {len(refs)} references")
    if not hyps:
        return 0.0
    return sum(sentence_bleu(h, r, cfg) for h, r in zip(hyps, refs)) / len(hyps)
