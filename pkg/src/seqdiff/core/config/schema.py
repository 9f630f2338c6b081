"""
Run configuration schema
Field types, defaults and admissible ranges of every configuration block
"""

from typing import Any, Dict

from seqdiff.core.data.synthetic import SYNTH_KINDS
from seqdiff.core.sampling.sampler import SC_MODES
from seqdiff.core.schedules.mans_schedule import MANS_PRESETS
from seqdiff.core.schedules.noise_schedule import SCHEDULE_KINDS
from seqdiff.core.text.vocabulary import NUM_RESERVED, TOKENIZER_MODES
from seqdiff.core.utils.validation_helpers import FieldSpec

TSV_TASK = "tsv"
TASK_KINDS = SYNTH_KINDS + (TSV_TASK,)
DEFAULT_RUN_DIR = "runs/default"


def _count(default: int, minimum: int = 1) -> FieldSpec:
    return FieldSpec("int", default, minimum=minimum)


def _probability(default: float) -> FieldSpec:
    return FieldSpec("float", default, minimum=0.0, maximum=1.0)


TASK_SCHEMA: Dict[str, Any] = {
    "kind": FieldSpec("str", "copy", choices=TASK_KINDS),
    "vocab_size": _count(16, NUM_RESERVED + 2),
    "min_length": _count(1),
    "max_length": _count(12),
    "count": _count(2000),
    "seed": _count(0, 0),
    "path": FieldSpec("str", None, nullable=True),
    "min_freq": _count(1),
    "tokenizer": FieldSpec("str", "whitespace", choices=TOKENIZER_MODES),
    "max_source_length": FieldSpec("int", None, nullable=True, minimum=1),
}

MODEL_SCHEMA: Dict[str, Any] = {
    "latent_dim": _count(16),
    "d_model": _count(64),
    "heads": _count(2),
    "ffn_dim": _count(128),
    "enc_layers": _count(2),
    "dec_layers": _count(2),
    "dropout": FieldSpec(
        "float", 0.1, minimum=0.0, maximum=1.0, exclusive_maximum=True
    ),
}

NOISE_SCHEMA: Dict[str, Any] = {
    "kind": FieldSpec("str", "sqrt", choices=SCHEDULE_KINDS),
    "shift": FieldSpec("float", None, nullable=True, minimum=0.0),
    "t_floor": FieldSpec(
        "float",
        1e-3,
        minimum=0.0,
        maximum=1.0,
        exclusive_minimum=True,
        exclusive_maximum=True,
    ),
}

SCP_SCHEMA: Dict[str, Any] = {
    "enabled": FieldSpec("bool", True),
    "lambda_min": FieldSpec(
        "float", 0.90, minimum=0.0, maximum=1.0, exclusive_minimum=True
    ),
    "lambda_max": FieldSpec(
        "float", 0.95, minimum=0.0, maximum=1.0, exclusive_minimum=True
    ),
    "gamma_min": FieldSpec("float", 0.15, minimum=0.0),
    "gamma_max": FieldSpec("float", 0.35, minimum=0.0),
}

MANS_SCHEMA: Dict[str, Any] = {
    "preset": FieldSpec("str", None, nullable=True, choices=MANS_PRESETS),
    "milestones": FieldSpec("int_list", (1000, 2000, 3000), minimum=1),
    "scalings": FieldSpec("float_list", (2.0, 3.0, 4.0), minimum=1.0),
    "apply_prob": _probability(0.5),
    "t_ceiling": FieldSpec(
        "float", 1.0 - 1e-3, minimum=0.0, maximum=1.0, exclusive_minimum=True
    ),
}

LR_SCHEMA: Dict[str, Any] = {
    "lr_max": FieldSpec("float", 5e-4, minimum=0.0, exclusive_minimum=True),
    "warmup": _count(500),
}

TRAINING_SCHEMA: Dict[str, Any] = {
    "batch_size": _count(32),
    "iterations": _count(3000, 0),
    "sc_prob": _probability(0.5),
    "grad_clip": FieldSpec("float", 1.0, minimum=0.0, exclusive_minimum=True),
    "seed": _count(0, 0),
    "validation_interval": _count(500),
    "log_interval": _count(100),
    "checkpoint_interval": _count(1000),
    "length_loss_weight": FieldSpec("float", 0.1, minimum=0.0),
    "label_smoothing": FieldSpec(
        "float", 0.1, minimum=0.0, maximum=1.0, exclusive_maximum=True
    ),
}

GENERATION_SCHEMA: Dict[str, Any] = {
    "nfe": _count(5),
    "sc_mode": FieldSpec("str", "reused", choices=SC_MODES),
    "length_beam": _count(1),
    "noise_beam": _count(1),
    "seed": _count(0, 0),
    "eps": FieldSpec("float", 1e-3, minimum=0.0, maximum=1.0, exclusive_maximum=True),
}

PATHS_SCHEMA: Dict[str, Any] = {
    "run_dir": FieldSpec("str", DEFAULT_RUN_DIR),
}

CONFIG_SCHEMA: Dict[str, Any] = {
    "task": TASK_SCHEMA,
    "model": MODEL_SCHEMA,
    "schedules": {
        "noise": NOISE_SCHEMA,
        "scp": SCP_SCHEMA,
        "mans": MANS_SCHEMA,
        "lr": LR_SCHEMA,
    },
    "training": TRAINING_SCHEMA,
    "generation": GENERATION_SCHEMA,
    "paths": PATHS_SCHEMA,
}
