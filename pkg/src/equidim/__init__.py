"""Exact equidistant dimension of small graphs, with witness constructions."""

__version__ = "0.1.0"
