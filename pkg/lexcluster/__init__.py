"""Compact core community detection with LexDFS edge scores."""

__version__ = "0.1.0"
