"""
Unit tests for interface definitions

Tests that all interfaces are properly defined as ABCs.
"""
