"""Radial SLE in multiply connected domains."""

__version__ = "0.1.0"
