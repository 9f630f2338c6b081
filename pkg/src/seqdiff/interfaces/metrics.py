"""
Sequence metric interface definitions for SeqDiff
"""

from abc import ABC, abstractmethod
from typing import Hashable, Sequence


class ISequenceMetric(ABC):
    """Abstract base class for hypothesis/reference similarity scores"""

    @property
    @abstractmethod
    def name(self) -> str:
        """Metric name used in reports"""
        pass

    @abstractmethod
    def score(self, hyp: Sequence[Hashable], ref: Sequence[Hashable]) -> float:
        """Score a hypothesis against a single reference, higher is better"""
        pass
