"""Spectral laboratory for the 1D Gross-Pitaevskii / KdV long-wave regime."""

__version__ = "0.1.0"
