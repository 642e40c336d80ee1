"""Hybrid topologies on the real line: exact sets, covers, bases and quasi-metrics."""

__version__ = "0.1.0"
