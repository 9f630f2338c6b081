"""
Analysis: estimation gap, residual fitting and normality testing
Sentence BLEU lives in seqdiff.core.metrics and is re-exported here
"""

from seqdiff.core.metrics import (
    BleuConfig,
    SentenceBleu,
    corpus_bleu,
    mean_sentence_bleu,
    sentence_bleu,
)

from .gap import (
    MIN_GAP_NFE,
    GapReport,
    ScBleuComparison,
    estimation_gap,
    example_generator,
    sc_bleu_compare,
)
from .normality import ShapiroResult, shapiro_coefficients, shapiro_wilk
from .residuals import (
    NormalityReport,
    ResidualStats,
    ScpAnchors,
    StepPairs,
    collect_residual_pairs,
    empirical_lambda_gamma,
    fit_residual_stats,
    fit_scp_anchors,
    standardized_residual_normality,
)

__all__ = [
    "BleuConfig",
    "SentenceBleu",
    "corpus_bleu",
    "mean_sentence_bleu",
    "sentence_bleu",
    "MIN_GAP_NFE",
    "GapReport",
    "ScBleuComparison",
    "estimation_gap",
    "example_generator",
    "sc_bleu_compare",
    "ShapiroResult",
    "shapiro_coefficients",
    "shapiro_wilk",
    "NormalityReport",
    "ResidualStats",
    "ScpAnchors",
    "StepPairs",
    "collect_residual_pairs",
    "empirical_lambda_gamma",
    "fit_residual_stats",
    "fit_scp_anchors",
    "standardized_residual_normality",
]
