"""
SeqDiff Test Suite

Unit tests for every package plus end-to-end training and decoding runs.
"""
