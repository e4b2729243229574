"""Exact computation of Thom polynomials by restriction equations."""

__version__ = "0.1.0"
