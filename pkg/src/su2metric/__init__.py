"""Metric operators and Hermitian counterparts for non-Hermitian quadratic su(2) Hamiltonians."""

__version__ = "0.1.0"
