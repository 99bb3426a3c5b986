"""Desk-scale engine for decorated simplicial sets, strict 2-categories,
free fibrations over scaled nerves, and cofinality checks."""

__version__ = "0.1.0"
