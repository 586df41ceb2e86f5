"""Trace-link-guided domain fact mining toolkit."""

__version__ = "0.1.0"
