"""Exact, desk-scale tools for equivariant approximation of symmetric semilinear sets."""

__version__ = "0.1.0"
