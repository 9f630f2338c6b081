"""
Core functionality for SeqDiff
"""

# Import utils module to make it accessible
from . import utils

__all__ = ["utils"]
