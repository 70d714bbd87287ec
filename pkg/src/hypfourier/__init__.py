"""Fourier coefficients of holomorphic Poincaré series for SL₂(ℤ)."""

__version__ = "0.1.0"
