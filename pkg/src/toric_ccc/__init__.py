"""Coherent-constructible correspondence for toric varieties, computed exactly."""

__version__ = "0.1.0"
