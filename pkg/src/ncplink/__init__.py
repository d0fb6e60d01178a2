"""Exact combinatorics of non-crossing partition lattices and their diagonal links."""

__version__ = "0.1.0"
