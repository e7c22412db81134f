"""Exact intersection theory for tangent-line skewness of curves in P^3 and P^4."""

__version__ = "0.1.0"
