"""Exact virtual fundamental classes of [0,1]-dg-manifolds."""

__version__ = "0.1.0"
