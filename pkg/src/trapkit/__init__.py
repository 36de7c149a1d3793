"""Oriented graphs with ProP and TraP structure, and their evaluation."""

__version__ = "0.1.0"
