"""Euler-characteristic pipelines for random ball covers of metric graphs."""

__version__ = "0.1.0"
