"""
Sequence similarity metrics
"""

from .bleu import (
    BleuConfig,
    SentenceBleu,
    corpus_bleu,
    mean_sentence_bleu,
    ngram_precisions,
    sentence_bleu,
)

__all__ = [
    "BleuConfig",
    "SentenceBleu",
    "corpus_bleu",
    "mean_sentence_bleu",
    "ngram_precisions",
    "sentence_bleu",
]
