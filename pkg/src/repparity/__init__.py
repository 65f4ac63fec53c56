"""Replicable learning of parities over GF(2)."""

__version__ = "0.1.0"
