"""Exact cyclotomic-rational engine for the K-theoretic FJRW calculus of the quintic singularity."""

__version__ = "0.1.0"
