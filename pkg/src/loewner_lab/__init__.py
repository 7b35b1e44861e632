"""Exact and Monte Carlo coefficient moments of Lévy-Loewner maps."""

__version__ = "0.1.0"
