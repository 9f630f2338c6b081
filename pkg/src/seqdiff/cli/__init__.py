"""
CLI module for SeqDiff
Provides the train, generate, eval, analyze and dump-schedule commands
"""
