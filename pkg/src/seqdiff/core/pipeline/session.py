"""
Run sessions
Builds datasets, models and trainers from a RunConfig and reloads trained
models from checkpoints
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from seqdiff.core.config import RunConfig, TaskConfig
from seqdiff.core.data import (
    ParallelDataset,
    build_synthetic_dataset,
    load_checkpoint,
    load_parallel_tsv,
)
from seqdiff.core.errors import CheckpointError, DomainError
from seqdiff.core.model import TransformerDenoiser, build_denoiser
from seqdiff.core.text.vocabulary import Vocabulary, detokenize, tokenize
from seqdiff.core.training import (
    CHECKPOINT_NAME,
    Trainer,
    TrainResult,
    load_model_arrays,
)

logger = logging.getLogger(__name__)


def build_dataset(
    task: TaskConfig, vocab: Optional[Vocabulary] = None
) -> ParallelDataset:
    """
    Build the full dataset a task describes

    Args:
        task: Task block of the run configuration
        vocab: Vocabulary to encode a TSV corpus with (default: build one)

    Returns:
        Dataset over every example; use split() for train/valid/test
    """
    if task.is_synthetic:
        return build_synthetic_dataset(task.synth_spec())
    dataset, _ = load_parallel_tsv(
        task.path,
        min_freq=task.min_freq,
        max_length=task.max_length,
        max_source_length=task.source_length_limit,
        mode=task.tokenizer,
        vocab=vocab,
    )
    return dataset


def build_model(config: RunConfig, vocab_size: int) -> TransformerDenoiser:
    denoiser_config = config.model.denoiser_config(
        vocab_size, config.task.max_length, config.task.source_length_limit
    )
    return build_denoiser(denoiser_config, seed=config.training.seed)


class TrainingSession:
    """A Trainer wired to the dataset, model and run directory of a RunConfig"""

    def __init__(self, config: RunConfig, resume: bool = False):
        self.config = config
        dataset = build_dataset(config.task)
        self.train_data = dataset.split("train")
        self.val_data = dataset.split("valid")
        logger.info(
            f"Dataset split: {len(self.train_data)} train, "
            f"{len(self.val_data)} valid examples"
        )
        model = build_model(config, dataset.vocab.size)
        self.trainer = Trainer(
            model,
            config.training,
            self.train_data,
            self.val_data,
            config.generation,
            config.paths.run_dir,
            config.to_dict(),
        )
        if resume:
            self._resume()

    @property
    def checkpoint_path(self) -> Path:
        return Path(self.config.paths.run_dir) / CHECKPOINT_NAME

    def _resume(self) -> None:
        path = self.checkpoint_path
        if not path.is_file():
            logger.info(f"No checkpoint at {path}; starting from iteration 0")
            return
        state = load_checkpoint(str(path))
        if state.meta.get("vocab") != self.train_data.vocab.tokens:
            raise CheckpointError(
                f"Checkpoint '{path}' was trained with a different vocabulary"
            )
        self.trainer.restore(state)

    def run(self) -> TrainResult:
        return self.trainer.run()


@dataclass
class TrainedModel:
    """A denoiser restored from a checkpoint with its configuration and vocabulary"""

    config: RunConfig
    model: TransformerDenoiser
    vocab: Vocabulary
    iteration: int

    def encode_source(self, text: str) -> List[int]:
        """
        Tokenize and encode one source line

        Raises:
            DomainError: If the line is empty or longer than the model accepts
        """
        ids = self.vocab.encode(tokenize(text, self.config.task.tokenizer))
        if not ids:
            raise DomainError("source line is empty")
        limit = self.model.config.source_length_limit
        if len(ids) > limit:
            raise DomainError(
                f"source has {len(ids)} tokens, the model accepts at most {limit}"
            )
        return ids

    def decode_target(self, ids: List[int]) -> str:
        return detokenize(self.vocab.decode(ids), self.config.task.tokenizer)

    def eval_dataset(
        self, split: str = "test", tsv_path: Optional[str] = None
    ) -> ParallelDataset:
        """
        Dataset to evaluate on

        Args:
            split: Split of the configured task used when no TSV is given
            tsv_path: Explicit 'source<TAB>target' file, used whole

        Returns:
            Dataset encoded with this model's vocabulary
        """
        task = self.config.task
        if tsv_path is not None:
            dataset, _ = load_parallel_tsv(
                tsv_path,
                max_length=task.max_length,
                max_source_length=self.model.config.source_length_limit,
                mode=task.tokenizer,
                vocab=self.vocab,
            )
            return dataset
        return build_dataset(task, vocab=self.vocab).split(split)


def load_trained(path: str) -> TrainedModel:
    """
    Restore a trained denoiser from a checkpoint file

    Raises:
        CheckpointError: If the file is unreadable or lacks its vocabulary
        ConfigurationError: If the embedded configuration is invalid
    """
    state = load_checkpoint(path)
    config = RunConfig.from_dict(state.config)
    if "vocab" not in state.meta:
        raise CheckpointError(f"Checkpoint '{path}' carries no vocabulary")
    vocab = Vocabulary(state.meta["vocab"])
    model = build_model(config, vocab.size)
    load_model_arrays(model, state)
    model.eval()
    logger.info(f"Loaded model at iteration {state.iteration} from {path}")
    return TrainedModel(config, model, vocab, state.iteration)
