"""Euclidean distance degrees: formulas, exact critical-point counts, averages."""

__version__ = "0.1.0"
