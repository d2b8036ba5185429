"""Proper actions on reductive homogeneous spaces via Cartan projections."""

__version__ = "0.1.0"
