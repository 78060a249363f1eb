"""Exact-arithmetic toolkit for 0-bipolar / 1-bipolar obstructions of the knots K_{n,k}."""

__version__ = "0.1.0"
