"""Numerical laboratory for twisted and mollified fourth moments of Dirichlet L-functions."""

__version__ = "0.1.0"
