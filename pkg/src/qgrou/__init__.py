"""Exact computer algebra for even quantum groups at roots of unity."""

__version__ = "0.1.0"
