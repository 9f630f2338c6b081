"""
Exception hierarchy for SeqDiff
Argument-level failures also derive from ValueError so callers can catch either
"""

from typing import Iterable


class SeqDiffError(Exception):
    """Base class for all SeqDiff errors"""


class DomainError(SeqDiffError, ValueError):
    """An argument lies outside the domain of an operation"""


class OrderingError(SeqDiffError, ValueError):
    """Diffusion times were passed out of order (s must precede t)"""


class ScheduleConsistencyError(SeqDiffError, ValueError):
    """A transition variance came out negative beyond rounding error"""


class ConfigurationError(SeqDiffError, ValueError):
    """Invalid run or component configuration"""

    def __init__(self, message: str, errors: Iterable[str] = ()):
        self.errors = list(errors)
        if self.errors:
            message = f"{message}: {'; '.join(self.errors)}"
        super().__init__(message)


class ShapeMismatchError(SeqDiffError, ValueError):
    """Tensor shapes do not agree"""


class NumericError(SeqDiffError, ValueError):
    """Non-finite values where finite ones are required"""


class DegenerateDimensionError(SeqDiffError, ValueError):
    """A regression dimension has no variance to fit against"""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(
            f"Dimension {dimension} has zero sum of squared regressors; "
            f"slope is undefined"
        )


class DivergenceError(SeqDiffError, RuntimeError):
    """Training produced a non-finite loss"""

    def __init__(self, iteration: int, detail: str):
        self.iteration = iteration
        super().__init__(f"Training diverged at iteration {iteration}: {detail}")


class CorpusFormatError(SeqDiffError, ValueError):
    """A parallel corpus file is empty or has malformed lines"""

    def __init__(self, path: str, errors: Iterable[str]):
        self.path = path
        self.errors = list(errors)
        super().__init__(f"Malformed corpus '{path}': {'; '.join(self.errors)}")


class CheckpointError(SeqDiffError):
    """A checkpoint could not be written or read"""


class ChecksumError(CheckpointError):
    """Checkpoint content does not match its trailing checksum"""


class CheckpointVersionError(CheckpointError):
    """Checkpoint was written by an incompatible format version"""
