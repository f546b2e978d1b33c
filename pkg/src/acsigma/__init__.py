"""Exact computational tools for AC(sigma) style function spaces on planar sets."""

__version__ = "0.1.0"
