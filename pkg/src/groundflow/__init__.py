"""Grounded workflow generation over N-CEN fund reports."""

__version__ = "0.1.0"
