"""Evolutionary multi-agent systems with autonomous hybridization."""

__version__ = "0.1.0"
