"""
Data and persistence: synthetic tasks, parallel corpora, checkpoints
"""

from .corpus import (
    Batch,
    ParallelDataset,
    ParallelExample,
    SPLITS,
    collate,
    load_parallel_tsv,
    pad_sequences,
    read_tsv_pairs,
    split_of,
)
from .synthetic import (
    SYNTH_KINDS,
    SynthTaskSpec,
    build_synthetic_dataset,
    generate_synth,
    make_example,
)
from .checkpoint import (
    FORMAT_VERSION,
    CheckpointState,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)

__all__ = [
    "Batch",
    "ParallelDataset",
    "ParallelExample",
    "SPLITS",
    "collate",
    "load_parallel_tsv",
    "pad_sequences",
    "read_tsv_pairs",
    "split_of",
    "SYNTH_KINDS",
    "SynthTaskSpec",
    "build_synthetic_dataset",
    "generate_synth",
    "make_example",
    "FORMAT_VERSION",
    "CheckpointState",
    "decode_checkpoint",
    "encode_checkpoint",
    "load_checkpoint",
    "save_checkpoint",
]
