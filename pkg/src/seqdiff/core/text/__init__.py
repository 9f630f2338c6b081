"""
Vocabulary management and the embedding codebook
"""

from .vocabulary import (
    Vocabulary,
    tokenize,
    detokenize,
    PAD_ID,
    BOS_ID,
    EOS_ID,
    UNK_ID,
    NUM_RESERVED,
    TOKENIZER_MODES,
)
from .codebook import embed, rounding_logits, round_to_tokens, init_codebook

__all__ = [
    "Vocabulary",
    "tokenize",
    "detokenize",
    "PAD_ID",
    "BOS_ID",
    "EOS_ID",
    "UNK_ID",
    "NUM_RESERVED",
    "TOKENIZER_MODES",
    "embed",
    "rounding_logits",
    "round_to_tokens",
    "init_codebook",
]
