"""Numerical laboratory for the finite and infinite Hardy operators."""

__version__ = "0.1.0"
