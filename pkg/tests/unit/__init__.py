"""
Unit tests for SeqDiff

Tests individual components in isolation.
"""
