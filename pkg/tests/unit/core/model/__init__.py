"""
Unit tests for core.model module

Tests DenoiserConfig, TransformerDenoiser, timestep_embedding and build_denoiser.
"""
