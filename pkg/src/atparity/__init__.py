"""Exact Latin-square parity invariants computed along independent routes."""

__version__ = "0.1.0"
