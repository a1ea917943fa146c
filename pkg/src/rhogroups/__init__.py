"""Exact products of element orders for small finite groups."""

__version__ = "0.1.0"
