"""Finite-group Fourier sampling: exact coset-state simulation and bound checks."""

__version__ = "0.1.0"
