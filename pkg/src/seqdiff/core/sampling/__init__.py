"""
Sampling: reverse-process generation and MBR decoding
"""

from .sampler import (
    SC_MODES,
    DenoiserCallCounter,
    GenerationConfig,
    Trajectory,
    TrajectoryStep,
    generate,
    generate_batch,
    inference_mode,
    time_grid,
    top_lengths,
)
from .mbr import (
    Candidate,
    CandidateSet,
    derive_seed,
    generate_candidates,
    mbr_decode,
    mbr_utilities,
    select_mbr,
)

__all__ = [
    "SC_MODES",
    "DenoiserCallCounter",
    "GenerationConfig",
    "Trajectory",
    "TrajectoryStep",
    "generate",
    "generate_batch",
    "inference_mode",
    "time_grid",
    "top_lengths",
    "Candidate",
    "CandidateSet",
    "derive_seed",
    "generate_candidates",
    "mbr_decode",
    "mbr_utilities",
    "select_mbr",
]
