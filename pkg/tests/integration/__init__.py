"""
Integration tests for SeqDiff

Tests training, checkpoint reloading, decoding and analysis working together.
"""
