"""Exact census of Bruhat cell intersections in unit lower triangular matrices."""

__version__ = "0.1.0"
