"""Jacobi diagrams, their relations, and the maps and series built on them."""

__version__ = "0.1.0"
